#include "conlab/weight.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "conlab/errors.hpp"

namespace conlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const char* what) {
    if (!ok) throw InvalidInput(what);
}

double linear_root(const LinearDecay& w) {
    double root = w.intercept / w.slope;
    return w.cutoff_sq ? std::min(root, *w.cutoff_sq) : root;
}

double smoothed_tail(const SmoothedConfidence& w, double s) {
    return w.c / w.eps * (w.R - std::sqrt(s));
}

}  // namespace

WeightFunction::WeightFunction(Family family) : family_(std::move(family)) {
    std::visit(Overloaded{
                   [](const CuckerSmale& w) {
                       require(w.H > 0 && std::isfinite(w.H), "Cucker-Smale weight needs H > 0");
                       require(w.beta >= 0 && std::isfinite(w.beta), "Cucker-Smale weight needs beta >= 0");
                   },
                   [](const SmoothedConfidence& w) {
                       require(w.c > 0 && std::isfinite(w.c), "smoothed confidence weight needs c > 0");
                       require(w.R > 0 && std::isfinite(w.R), "smoothed confidence weight needs R > 0");
                       require(w.eps > 0 && w.eps < w.R, "smoothed confidence weight needs 0 < eps < R");
                   },
                   [](const StepConfidence& w) {
                       require(w.R > 0 && std::isfinite(w.R), "step confidence weight needs R > 0");
                   },
                   [](const LinearDecay& w) {
                       require(w.intercept > 0 && std::isfinite(w.intercept), "linear decay weight needs intercept > 0");
                       require(w.slope > 0 && std::isfinite(w.slope), "linear decay weight needs slope > 0");
                       require(!w.cutoff_sq || *w.cutoff_sq > 0, "linear decay cutoff must be positive");
                   },
                   [](const Constant& w) { require(w.c > 0 && std::isfinite(w.c), "constant weight needs c > 0"); },
               },
               family_);
}

std::string WeightFunction::name() const {
    return std::visit(Overloaded{
                          [](const CuckerSmale&) { return std::string("cucker-smale"); },
                          [](const SmoothedConfidence&) { return std::string("smoothed-confidence"); },
                          [](const StepConfidence&) { return std::string("step-confidence"); },
                          [](const LinearDecay&) { return std::string("linear-decay"); },
                          [](const Constant&) { return std::string("constant"); },
                      },
                      family_);
}

double WeightFunction::evaluate(double s) const {
    if (!(s >= 0)) throw InvalidInput("weight evaluated at negative squared distance");
    return std::visit(Overloaded{
                          [s](const CuckerSmale& w) { return w.H / std::pow(1.0 + s, w.beta); },
                          [s](const SmoothedConfidence& w) {
                              double inner = (w.R - w.eps) * (w.R - w.eps);
                              if (s < inner) return w.c;
                              if (s < w.R * w.R) return smoothed_tail(w, s);
                              return 0.0;
                          },
                          [s](const StepConfidence& w) { return s < w.R * w.R ? 1.0 : 0.0; },
                          [s](const LinearDecay& w) {
                              if (s >= linear_root(w)) return 0.0;
                              return std::max(w.intercept - w.slope * s, 0.0);
                          },
                          [](const Constant& w) { return w.c; },
                      },
                      family_);
}

double WeightFunction::at_zero() const { return evaluate(0.0); }

std::optional<double> WeightFunction::support_sq() const {
    return std::visit(Overloaded{
                          [](const CuckerSmale&) -> std::optional<double> { return std::nullopt; },
                          [](const SmoothedConfidence& w) -> std::optional<double> { return w.R * w.R; },
                          [](const StepConfidence& w) -> std::optional<double> { return w.R * w.R; },
                          [](const LinearDecay& w) -> std::optional<double> { return linear_root(w); },
                          [](const Constant&) -> std::optional<double> { return std::nullopt; },
                      },
                      family_);
}

bool WeightFunction::continuous() const {
    if (std::holds_alternative<StepConfidence>(family_)) return false;
    if (const auto* lin = std::get_if<LinearDecay>(&family_))
        return !lin->cutoff_sq || *lin->cutoff_sq >= lin->intercept / lin->slope;
    return true;
}

double evaluate_weight(const WeightFunction& weight, double s) { return weight.evaluate(s); }

double integral_weight(const WeightFunction& weight, double z) {
    if (!(z >= 0)) throw InvalidInput("integral upper limit must be nonnegative");
    return std::visit(
        Overloaded{
            [z](const CuckerSmale& w) {
                if (std::isinf(z)) return w.beta <= 1.0 ? kInf : w.H / (w.beta - 1.0);
                if (w.beta == 1.0) return w.H * std::log1p(z);
                return w.H / (1.0 - w.beta) * (std::pow(1.0 + z, 1.0 - w.beta) - 1.0);
            },
            [z](const SmoothedConfidence& w) {
                double inner = (w.R - w.eps) * (w.R - w.eps);
                double outer = w.R * w.R;
                double flat = w.c * std::min(z, inner);
                if (z <= inner) return flat;
                double upper = std::min(z, outer);
                auto tail = [&w](double s) { return smoothed_tail(w, s); };
                return flat + boost::math::quadrature::gauss_kronrod<double, 31>::integrate(tail, inner, upper, 20,
                                                                                           1e-13);
            },
            [z](const StepConfidence& w) { return std::min(z, w.R * w.R); },
            [z](const LinearDecay& w) {
                double y = std::min(z, linear_root(w));
                return w.intercept * y - 0.5 * w.slope * y * y;
            },
            [z](const Constant& w) { return std::isinf(z) ? kInf : w.c * z; },
        },
        weight.family());
}

double staircase_w(const WeightFunction& weight, double r, double z) {
    if (!(r >= 0) || !std::isfinite(r)) throw InvalidInput("staircase width must be finite and nonnegative");
    if (!(z >= 0) || !std::isfinite(z)) throw InvalidInput("staircase argument must be finite and nonnegative");
    if (r == 0) return integral_weight(weight, z);
    if (z < r) return weight(r) * z;

    // Whole cells below z; corrected so that k*r <= z < (k+1)*r holds in floating point.
    auto k = static_cast<long long>(std::floor(z / r));
    while (static_cast<double>(k + 1) * r <= z) ++k;
    while (k > 0 && static_cast<double>(k) * r > z) --k;
    double remainder = z - static_cast<double>(k) * r;

    double total = 0.0;
    for (long long s = 1; s <= k; ++s) {
        double a = weight(static_cast<double>(s) * r);
        if (a == 0.0) return total;  // nonincreasing, so every later term vanishes too
        total += a * r;
    }
    if (remainder > 0) total += weight(static_cast<double>(k + 1) * r) * remainder;
    return total;
}

}  // namespace conlab
