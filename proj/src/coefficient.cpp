#include "homoglab/coefficient.hpp"

#include <cmath>
#include <limits>

namespace homoglab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

bool finite(double v) { return std::isfinite(v); }

double periodic_trig_value(const PeriodicTrigCoef& c, Vec2 x, int dim) {
    double v = c.base;
    for (const TrigTerm& t : c.terms) {
        double arg = t.freq[0] * x[0];
        if (dim == 2) arg += t.freq[1] * x[1];
        v += t.amplitude * std::sin(kTwoPi * arg + t.phase);
    }
    return v;
}

double radius(Vec2 x, int dim) {
    return dim == 1 ? std::fabs(x[0]) : std::hypot(x[0], x[1]);
}

/// sin(ln(1+r/ε)) evaluated without forming ε when it underflows.
double log_osc_phase_rescaled(double r, const EpsDescriptor& eps) {
    if (r < 0.0 || !finite(r)) throw NonFinite("radius not finite");
    if (eps.form == EpsDescriptor::Form::Literal) {
        const double ratio = r / eps.eps;
        if (finite(ratio)) return std::log1p(ratio);
        // fall through to the log-domain expression with moderate -ln ε
    }
    const double eps_val = eps.value_or_zero();
    const double t = std::log(r + eps_val);  // ln(ε + r); -inf only if both vanish
    if (!finite(t)) throw NonFinite("ln(eps + r) not representable (r = 0, eps underflows)");
    if (eps.form == EpsDescriptor::Form::ExpSequence) {
        // ln(1+r/ε) = 2nπ + y + ln(ε+r); drop the exact multiple of 2π so the
        // sine argument stays well-conditioned for every n.
        return eps.y + t;
    }
    const double minus_log = eps.minus_log();
    const double phase = minus_log + t;
    if (!finite(phase) || std::fabs(phase) > 0x1p52)
        throw NonFinite("log-oscillation phase not representable for this eps");
    return phase;
}

/// sin-argument ln(1+ln(1+r/ε)), log-domain safe for double-exponential ε.
double iter_log_osc_phase_rescaled(double r, const EpsDescriptor& eps) {
    if (r < 0.0 || !finite(r)) throw NonFinite("radius not finite");
    if (eps.form == EpsDescriptor::Form::Literal) {
        const double ratio = r / eps.eps;
        if (finite(ratio)) return std::log1p(std::log1p(ratio));
    }
    const double eps_val = eps.value_or_zero();
    const double t = std::log(r + eps_val);  // inner ln(ε+r)
    if (!finite(t)) throw NonFinite("ln(eps + r) not representable (r = 0, eps underflows)");
    if (eps.form == EpsDescriptor::Form::DoubleExpSequence) {
        // ln(1 + L0 + t) = ln(-ln ε) + ln1p((1+t)/L0) with L0 = -ln ε; the
        // first term is the stored c·n + c0, exact even when L0 overflows.
        const double lnln = eps.log_minus_log();
        const double l0 = std::exp(lnln);
        const double corr = std::isinf(l0) ? 0.0 : std::log1p((1.0 + t) / l0);
        const double phase = lnln + corr;
        if (!finite(phase) || std::fabs(phase) > 0x1p52)
            throw NonFinite("iterated-log phase not representable for this eps");
        return phase;
    }
    const double inner = 1.0 + eps.minus_log() + t;  // 1 + ln(1+r/ε)
    if (!(inner > 0.0) || !finite(inner))
        throw NonFinite("iterated-log argument not representable for this eps");
    return std::log(inner);
}

} // namespace

double EpsDescriptor::minus_log() const {
    switch (form) {
        case Form::Literal: return -std::log(eps);
        case Form::ExpSequence: return kTwoPi * n + y;
        case Form::DoubleExpSequence: return std::exp(c * n + c0);
    }
    return 0.0;
}

double EpsDescriptor::log_minus_log() const {
    switch (form) {
        case Form::Literal: return std::log(-std::log(eps));
        case Form::ExpSequence: return std::log(kTwoPi * n + y);
        case Form::DoubleExpSequence: return c * n + c0;
    }
    return 0.0;
}

double EpsDescriptor::value_or_zero() const {
    if (form == Form::Literal) return eps;
    const double ml = minus_log();
    return std::isinf(ml) ? 0.0 : std::exp(-ml);
}

double BumpSpec::eval(Vec2 x, int dim) const {
    const double dx = x[0] - center[0];
    const double dy = dim == 2 ? x[1] - center[1] : 0.0;
    const double q = (dx * dx + dy * dy) / (width * width);
    return amplitude * std::pow(1.0 + q, -0.5 * decay);
}

SymMat CoefficientSpec::eval(Vec2 x, int dim) const {
    return std::visit(
        [&](const auto& k) -> SymMat {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, ConstantCoef>) {
                return SymMat::scalar(dim, k.value);
            } else if constexpr (std::is_same_v<T, PeriodicTrigCoef>) {
                return SymMat::scalar(dim, periodic_trig_value(k, x, dim));
            } else if constexpr (std::is_same_v<T, RadialLogOscCoef>) {
                const double r = radius(x, dim);
                return SymMat::scalar(dim, k.base + k.amplitude * std::sin(std::log1p(r)));
            } else if constexpr (std::is_same_v<T, RadialIterLogOscCoef>) {
                const double r = radius(x, dim);
                return SymMat::scalar(
                    dim, k.base + k.amplitude * std::sin(std::log1p(std::log1p(r))));
            } else if constexpr (std::is_same_v<T, PerturbedPeriodicCoef>) {
                return SymMat::scalar(
                    dim, periodic_trig_value(k.periodic, x, dim) + k.bump.eval(x, dim));
            } else {  // TabulatedCoef
                const MatrixField& f = *k.field;
                const Grid& g = f.grid;
                const double h = g.spacing();
                const int i0 = static_cast<int>(std::floor((x[0] - g.origin[0]) / h));
                const int i1 = g.dim == 2
                                   ? static_cast<int>(std::floor((x[1] - g.origin[1]) / h))
                                   : 0;
                if (i0 < 0 || i0 >= g.cells[0] || i1 < 0 || i1 >= g.cells[1])
                    throw DomainTooSmall("tabulated coefficient evaluated outside its grid");
                return f.at(g.index(i0, i1));
            }
        },
        kind);
}

SymMat CoefficientSpec::eval_rescaled(Vec2 x, int dim, const EpsDescriptor& eps) const {
    return std::visit(
        [&](const auto& k) -> SymMat {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, ConstantCoef>) {
                return SymMat::scalar(dim, k.value);
            } else if constexpr (std::is_same_v<T, RadialLogOscCoef>) {
                const double phase = log_osc_phase_rescaled(radius(x, dim), eps);
                return SymMat::scalar(dim, k.base + k.amplitude * std::sin(phase));
            } else if constexpr (std::is_same_v<T, RadialIterLogOscCoef>) {
                const double phase = iter_log_osc_phase_rescaled(radius(x, dim), eps);
                return SymMat::scalar(dim, k.base + k.amplitude * std::sin(phase));
            } else {
                if (eps.form != EpsDescriptor::Form::Literal)
                    throw NonFinite(
                        "log-domain rescaled evaluation is only available for the "
                        "radial log-oscillating kinds");
                const Vec2 xs{x[0] / eps.eps, dim == 2 ? x[1] / eps.eps : 0.0};
                return eval(xs, dim);
            }
        },
        kind);
}

CoefficientSpec CoefficientSpec::constant(double c) {
    if (!(c > 0.0)) throw EllipticityViolation("constant coefficient must be positive");
    CoefficientSpec s;
    s.kind = ConstantCoef{c};
    s.lambda_floor = c;
    s.lambda_upper = c;
    return s;
}

CoefficientSpec CoefficientSpec::periodic_trig(double base, std::vector<TrigTerm> terms,
                                               double lambda) {
    CoefficientSpec s;
    double amp = 0.0;
    for (const TrigTerm& t : terms) amp += std::fabs(t.amplitude);
    if (!(base - amp >= lambda) || !(lambda > 0.0))
        throw EllipticityViolation("trig coefficient violates the declared floor");
    s.kind = PeriodicTrigCoef{base, std::move(terms)};
    s.lambda_floor = lambda;
    s.lambda_upper = base + amp;
    return s;
}

CoefficientSpec CoefficientSpec::radial_log_osc(double base, double amplitude) {
    const double lambda = base - std::fabs(amplitude);
    if (!(lambda > 0.0))
        throw EllipticityViolation("radial coefficient requires base - |amplitude| > 0");
    CoefficientSpec s;
    s.kind = RadialLogOscCoef{base, amplitude};
    s.lambda_floor = lambda;
    s.lambda_upper = base + std::fabs(amplitude);
    return s;
}

CoefficientSpec CoefficientSpec::radial_iter_log_osc(double base, double amplitude) {
    const double lambda = base - std::fabs(amplitude);
    if (!(lambda > 0.0))
        throw EllipticityViolation("radial coefficient requires base - |amplitude| > 0");
    CoefficientSpec s;
    s.kind = RadialIterLogOscCoef{base, amplitude};
    s.lambda_floor = lambda;
    s.lambda_upper = base + std::fabs(amplitude);
    return s;
}

CoefficientSpec CoefficientSpec::perturbed_periodic(PeriodicTrigCoef periodic, BumpSpec bump,
                                                    double lambda) {
    double amp = 0.0;
    for (const TrigTerm& t : periodic.terms) amp += std::fabs(t.amplitude);
    const double bump_min = std::min(0.0, bump.amplitude);
    if (!(periodic.base - amp + bump_min >= lambda) || !(lambda > 0.0))
        throw EllipticityViolation("perturbed coefficient violates the declared floor");
    CoefficientSpec s;
    s.kind = PerturbedPeriodicCoef{std::move(periodic), bump};
    s.lambda_floor = lambda;
    s.lambda_upper = periodic.base + amp + std::max(0.0, bump.amplitude);
    return s;
}

CoefficientSpec CoefficientSpec::tabulated(std::shared_ptr<const MatrixField> field,
                                           double lambda) {
    if (!field) throw BadGrid("tabulated coefficient requires a field");
    CoefficientSpec s;
    s.kind = TabulatedCoef{std::move(field)};
    s.lambda_floor = lambda;
    return s;
}

namespace {

MatrixField sample_impl(const CoefficientSpec& spec, const Grid& grid,
                        const EpsDescriptor* eps) {
    grid.validate();
    MatrixField out(grid);
    const double tol = 1e-12;
    for (int i1 = 0; i1 < grid.cells[1]; ++i1) {
        for (int i0 = 0; i0 < grid.cells[0]; ++i0) {
            const Vec2 x = grid.cell_center(i0, i1);
            const SymMat m = eps ? spec.eval_rescaled(x, grid.dim, *eps)
                                 : spec.eval(x, grid.dim);
            if (!finite(m.a00) || (grid.dim == 2 && (!finite(m.a11) || !finite(m.a01))))
                throw NonFinite("coefficient sample not finite");
            const auto [lo, hi] = m.eig_range(grid.dim);
            if (lo < spec.lambda_floor - tol)
                throw EllipticityViolation("coefficient sample below the declared floor");
            if (spec.lambda_upper > 0.0 && hi > spec.lambda_upper + tol)
                throw EllipticityViolation("coefficient sample above the declared bound");
            out.set(grid.index(i0, i1), m);
        }
    }
    return out;
}

} // namespace

MatrixField sample_field(const CoefficientSpec& spec, const Grid& grid) {
    return sample_impl(spec, grid, nullptr);
}

MatrixField sample_rescaled(const CoefficientSpec& spec, const Grid& grid,
                            const EpsDescriptor& eps) {
    return sample_impl(spec, grid, &eps);
}

std::pair<double, double> check_uniform_ellipticity(const MatrixField& field) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::int64_t i = 0; i < field.grid.cell_count(); ++i) {
        const auto [a, b] = field.at(i).eig_range(field.grid.dim);
        lo = std::min(lo, a);
        hi = std::max(hi, b);
    }
    return {lo, hi};
}

} // namespace homoglab
