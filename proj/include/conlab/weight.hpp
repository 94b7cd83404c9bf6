#pragma once

#include <optional>
#include <string>
#include <variant>

namespace conlab {

// Interaction weight families alpha(s), s = squared inter-agent distance.

struct CuckerSmale {
    double H = 1.0;
    double beta = 1.0;

    bool operator==(const CuckerSmale&) const = default;
};

// c on [0,(R-eps)^2), f(s) = (c/eps)(R - sqrt(s)) on [(R-eps)^2, R^2), 0 beyond.
struct SmoothedConfidence {
    double c = 1.0;
    double R = 1.0;
    double eps = 0.1;

    bool operator==(const SmoothedConfidence&) const = default;
};

struct StepConfidence {
    double R = 1.0;

    bool operator==(const StepConfidence&) const = default;
};

// max(intercept - slope*s, 0), optionally truncated to 0 at s >= cutoff_sq.
struct LinearDecay {
    double intercept = 1.0;
    double slope = 1.0;
    std::optional<double> cutoff_sq;

    bool operator==(const LinearDecay&) const = default;
};

struct Constant {
    double c = 1.0;

    bool operator==(const Constant&) const = default;
};

class WeightFunction {
public:
    using Family = std::variant<CuckerSmale, SmoothedConfidence, StepConfidence, LinearDecay, Constant>;

    WeightFunction() : family_(Constant{}) {}
    WeightFunction(Family family);

    const Family& family() const { return family_; }
    std::string name() const;

    double operator()(double s) const { return evaluate(s); }
    double evaluate(double s) const;
    double at_zero() const;

    /// Squared support radius R^2 for compactly supported families, empty otherwise.
    std::optional<double> support_sq() const;
    bool compact_support() const { return support_sq().has_value(); }
    bool continuous() const;

    bool operator==(const WeightFunction&) const = default;

private:
    Family family_;
};

double evaluate_weight(const WeightFunction& weight, double s);

/// Integral of alpha over [0, z]. z may be +infinity; the result is +infinity
/// when the integral diverges.
double integral_weight(const WeightFunction& weight, double z);

/// Staircase under-approximation of the integral on a grid of width r.
/// r == 0 returns the exact integral.
double staircase_w(const WeightFunction& weight, double r, double z);

}  // namespace conlab
