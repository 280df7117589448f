#pragma once

#include <cstddef>
#include <vector>

#include "clf/geometry.hpp"
#include "clf/log_scalar.hpp"
#include "clf/patches.hpp"
#include "clf/quadrature.hpp"
#include "clf/varexp.hpp"

namespace clf {

inline constexpr double default_log_budget = 1e6;

/// Scales alpha_k = exp(ln_alphas[k-1]) of the counterexample, k = 1..N.
struct AlphaSchedule {
    std::vector<double> ln_alphas;
    ExponentField field;

    std::size_t size() const { return ln_alphas.size(); }
    /// log(1/alpha_k), k one-based.
    double ln_inv_alpha(std::size_t k) const { return -ln_alphas.at(k - 1); }
    double alpha(std::size_t k) const { return std::exp(ln_alphas.at(k - 1)); }
};

/// (1/alpha)^(1/(p0 + psi(alpha)) - 1/p0) <= 2^(-k/p0), in log form, with
/// L = log(1/alpha).
bool decay_condition_holds(double ln_inv_alpha, std::size_t k, const ExponentField& field);

/// For each k, the smallest log(1/alpha_k) with the decay condition and
/// alpha_k <= alpha_{k-1}/2, by bisection on the monotone condition.
/// Throws DomainError if N < 1 or the exponent is constant, and Error if
/// log(1/alpha_N) would exceed `log_budget`.
AlphaSchedule select_alphas(int n, const ExponentField& field,
                            double log_budget = default_log_budget);

struct ScheduleCheck {
    bool halving = true;
    bool decay = true;
    /// max over k of [L (1/(p0+psi) - 1/p0)] / [-k log 2 / p0]; <= 1 when the
    /// decay condition holds.
    double worst_decay_ratio = 0;

    bool ok() const { return halving && decay; }
};

ScheduleCheck check_schedule(const AlphaSchedule& s);

/// lambda_k = alpha_k^(-2/(p0 + psi(alpha_k))), k one-based.
LogScalar lambda_of(std::size_t k, const AlphaSchedule& s);

/// h = sum_k lambda_k chi_{W_k}.
PatchSum build_h(const AlphaSchedule& s, const GammaConfig& cfg);

/// value = mantissa * exp(ln_scale); carries sums whose magnitude exceeds double.
struct ScaledComplex {
    double ln_scale = 0;
    Complex mantissa{};

    /// Real part as a signed LogScalar.
    LogScalar real() const;
    Complex value() const { return std::exp(ln_scale) * mantissa; }
};

ScaledComplex operator+(const ScaledComplex& a, const ScaledComplex& b);

/// Under the reproducing normalization K h has negative real part on the
/// target patches; the sign-definite quantity used throughout the blow-up
/// argument is orientation * Re K h.
inline constexpr double image_orientation = -1.0;

inline double oriented_real(Complex v)
{
    return image_orientation * v.real();
}

/// K applied to a PatchSum at boundary points outside every patch.
/// One Leray rule per term is built once and reused for every point.
class ImageEvaluator {
public:
    ImageEvaluator(const PatchSum& h, const QuadratureGrid& grid, const Ellipsoid& e);

    /// K h(z) as a scaled complex.
    ScaledComplex operator()(const BoundaryPoint& z) const;
    /// K chi_{W_j}(z), unweighted; j zero-based.
    Complex unit_term(std::size_t j, const BoundaryPoint& z) const;
    std::size_t size() const { return rules_.size(); }

private:
    std::vector<BoundaryRule> rules_;
    std::vector<double> scales_;
    std::vector<double> ln_weights_;
    Ellipsoid e_;
};

ScaledComplex eval_H(const PatchSum& h, const BoundaryPoint& z, const QuadratureGrid& grid,
                     const Ellipsoid& e);

/// Counts of equispaced evaluation points (ends included) over a patch box.
struct EvalGrid {
    int n_r = 5;
    int n_t1 = 5;
    int n_t2 = 5;

    void validate() const;
};

std::vector<BoundaryPoint> evaluation_points(const PatchSpec& p, const EvalGrid& g,
                                             const Ellipsoid& e);

/// K chi_{W_alpha} over the evaluation grid of V_alpha.
struct ImageFloorReport {
    double alpha = 0;
    double min_oriented_re = 0; ///< min of -Re H_alpha
    double max_oriented_re = 0;
    double min_re = 0;          ///< Re H_alpha itself (negative)
    double max_re = 0;
    long points = 0;
};

ImageFloorReport image_floor_scan(double alpha, const GammaConfig& cfg, const QuadratureGrid& patch_grid,
                         const EvalGrid& v_grid, const Ellipsoid& e);

struct BlowupConfig {
    Ellipsoid ellipsoid{2.0, 3.0};
    GammaConfig gammas;
    ExponentField field;
    int n_max = 8;
    QuadratureGrid patch_grid{32, 16, 16, NodeRule::gauss_legendre};
    EvalGrid v_grid{5, 5, 5};
    double tol = 1e-10;
    double log_budget = default_log_budget;

    /// Uses choose_gammas(ellipsoid, 0.9) for the band coefficients.
    static BlowupConfig defaults();
};

/// K chi_{W_j} on the evaluation grid of every V_k: the expensive part of
/// the experiment, shared by the blow-up rows and the positive control.
struct ImageTable {
    AlphaSchedule schedule;
    PatchSum h;
    std::vector<PatchSpec> targets;                  ///< V_k
    std::vector<std::vector<BoundaryPoint>> points;  ///< evaluation points per V_k
    /// values[k][i][j] = K chi_{W_j}(points[k][i])
    std::vector<std::vector<std::vector<Complex>>> values;

    /// min over V_k points of orientation * Re K h^(n)(z), as a LogScalar
    /// (k and n one-based). Negative or zero when the terms do not share a sign.
    LogScalar min_image_on_target(std::size_t k, std::size_t n) const;
    /// min over V_k points of orientation * Re K chi_{W_k}(z).
    double min_diagonal(std::size_t k) const;
    /// orientation * Re K chi_{W_j} > 0 on V_k for all j != k, j, k <= n.
    bool cross_positive(std::size_t n) const;
};

ImageTable build_image_table(const BlowupConfig& cfg);

struct BlowupRow {
    int n = 0;
    LogScalar modular_h;
    LogScalar norm_h;
    LogScalar modular_H_lower;
    LogScalar norm_H_lower;
    double min_ReH_on_Vk = 0; ///< min over k <= n of the oriented single-patch image on V_k
    bool cross_positivity_ok = false;
    LogScalar increment_h;    ///< modular contribution of term n alone
};

struct BlowupResult {
    AlphaSchedule schedule;
    std::vector<BlowupRow> rows;
    double source_coefficient = 0; ///< C_W: S(W_alpha) / alpha^2
    double target_coefficient = 0; ///< C_V
    /// C_W * sum_{k <= n} 4^-k for each row.
    std::vector<double> certified_bound;
};

BlowupResult blowup_experiment(const BlowupConfig& cfg);
BlowupResult blowup_experiment(const BlowupConfig& cfg, const ImageTable& table);

struct ControlRow {
    int n = 0;
    LogScalar norm_h;
    LogScalar norm_H_lower;
    double ratio = 0;
};

/// The blow-up pipeline with the constant exponent p_const (same schedule
/// and test function).
std::vector<ControlRow> positive_control(const BlowupConfig& cfg, double p_const);
std::vector<ControlRow> positive_control(const BlowupConfig& cfg, const ImageTable& table,
                                         double p_const);

} // namespace clf
