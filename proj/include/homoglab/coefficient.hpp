#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "homoglab/grid.hpp"

namespace homoglab {

/// ε, possibly far below the smallest positive double.
///
/// The sequence forms never store the float ε itself: ExpSequence keeps the
/// phase y and index n of ε = exp(-2nπ - y), DoubleExpSequence keeps
/// ln(-ln ε) = c·n + c0 of ε = exp(-exp(c·n + c0)).  Coefficient evaluation
/// works directly with -ln ε (resp. ln(-ln ε)), so the iterated-log
/// coefficients stay computable even when ε underflows every float format.
struct EpsDescriptor {
    enum class Form { Literal, ExpSequence, DoubleExpSequence };

    Form form = Form::Literal;
    double eps = 1.0;     ///< Literal only
    double y = 0.0;       ///< ExpSequence phase
    int n = 0;            ///< sequence index
    double c = 0.0, c0 = 0.0;  ///< DoubleExpSequence: ln(-ln ε) = c·n + c0

    static EpsDescriptor literal(double e) {
        if (!(e > 0.0) || e > 1.0)
            throw BadGrid("literal eps must lie in (0, 1]");
        EpsDescriptor d;
        d.form = Form::Literal;
        d.eps = e;
        return d;
    }

    static EpsDescriptor exp_sequence(double y, int n) {
        EpsDescriptor d;
        d.form = Form::ExpSequence;
        d.y = y;
        d.n = n;
        return d;
    }

    static EpsDescriptor double_exp_sequence(double c, double c0, int n) {
        EpsDescriptor d;
        d.form = Form::DoubleExpSequence;
        d.c = c;
        d.c0 = c0;
        d.n = n;
        return d;
    }

    /// -ln ε; may overflow to +inf for DoubleExpSequence (handled by callers
    /// through log_minus_log).
    double minus_log() const;
    /// ln(-ln ε); defined for every form with ε < 1.
    double log_minus_log() const;
    /// ε rounded to double; 0 when it underflows.
    double value_or_zero() const;
};

struct TrigTerm {
    double amplitude = 0.0;
    std::array<int, 2> freq{0, 0};  ///< integer frequency vector k
    double phase = 0.0;             ///< a += amplitude·sin(2π k·x + phase)
};

struct ConstantCoef {
    double value = 1.0;
};

struct PeriodicTrigCoef {
    double base = 0.0;
    std::vector<TrigTerm> terms;
};

/// base + amplitude·sin(ln(1+|x|))
struct RadialLogOscCoef {
    double base = 2.0;
    double amplitude = 1.0;
};

/// base + amplitude·sin(ln(1+ln(1+|x|)))
struct RadialIterLogOscCoef {
    double base = 2.0;
    double amplitude = 1.0;
};

/// amplitude·(1 + |x-center|²/width²)^{-s/2}: radial bump decaying like |x|^{-s}.
struct BumpSpec {
    double amplitude = 0.5;
    double width = 1.0;
    double decay = 2.0;  ///< exponent s > 0
    Vec2 center{0.0, 0.0};

    double eval(Vec2 x, int dim) const;
};

struct PerturbedPeriodicCoef {
    PeriodicTrigCoef periodic;
    BumpSpec bump;
};

struct TabulatedCoef {
    std::shared_ptr<const MatrixField> field;
};

/// Closed-form (or tabulated) descriptor of a symmetric coefficient a(x).
///
/// All analytic kinds are scalar-valued and wrap to a(x)·I; genuinely
/// anisotropic coefficients enter through Tabulated.  lambda_floor is the
/// declared ellipticity constant λ: sampling verifies min eig ≥ λ.
struct CoefficientSpec {
    using Kind = std::variant<ConstantCoef, PeriodicTrigCoef, RadialLogOscCoef,
                              RadialIterLogOscCoef, PerturbedPeriodicCoef, TabulatedCoef>;

    Kind kind = ConstantCoef{};
    double lambda_floor = 1.0;
    double lambda_upper = 0.0;  ///< declared Λ; 0 = unspecified
    double holder_alpha = 0.5;  ///< metadata only

    /// Point evaluation a(x).
    SymMat eval(Vec2 x, int dim) const;

    /// Point evaluation a(x/ε) through the log-domain path where needed.
    SymMat eval_rescaled(Vec2 x, int dim, const EpsDescriptor& eps) const;

    static CoefficientSpec constant(double c);
    static CoefficientSpec periodic_trig(double base, std::vector<TrigTerm> terms,
                                         double lambda);
    static CoefficientSpec radial_log_osc(double base, double amplitude);
    static CoefficientSpec radial_iter_log_osc(double base, double amplitude);
    static CoefficientSpec perturbed_periodic(PeriodicTrigCoef periodic, BumpSpec bump,
                                              double lambda);
    static CoefficientSpec tabulated(std::shared_ptr<const MatrixField> field,
                                     double lambda);
};

/// Sample a(x) at every cell center.  Throws EllipticityViolation /NonFinite.
MatrixField sample_field(const CoefficientSpec& spec, const Grid& grid);

/// Sample a(x/ε) at every cell center (log-domain safe for the radial kinds).
MatrixField sample_rescaled(const CoefficientSpec& spec, const Grid& grid,
                            const EpsDescriptor& eps);

/// Extremal eigenvalues over all cells of a sampled coefficient.
std::pair<double, double> check_uniform_ellipticity(const MatrixField& field);

} // namespace homoglab
