#ifndef OE_TYPES_HPP
#define OE_TYPES_HPP

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "oe/extreal.hpp"

namespace oe {

using Matrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using cxd = std::complex<double>;

// Tolerances shared by the state/measurement invariants. The relative
// eigenvalue clamp is the single source of truth for support decisions
// (finite vs infinite relative entropy).
namespace tol {
inline constexpr double herm_per_dim = 1e-10;   // Hermiticity, scaled by dim
inline constexpr double trace = 1e-10;          // |tr - 1|
inline constexpr double eig_negative = 1e-10;   // eigenvalues >= -this
inline constexpr double support_rel = 1e-12;    // kernel cut, relative to lambda_max
inline constexpr double support_weight = 1e-9;  // weight on kernel that flags infinity
inline constexpr double prob_renorm = 1e-9;     // |sum p - 1| repairable by renormalization
} // namespace tol

// Probability distribution over measurement outcomes.
class ProbVector {
public:
    ProbVector() = default;
    explicit ProbVector(std::vector<double> p);

    std::size_t size() const { return p_.size(); }
    double operator[](std::size_t i) const { return p_[i]; }
    const std::vector<double>& probs() const { return p_; }

private:
    std::vector<double> p_;
};

// Density operator (or MaxEnt prior): Hermitian, PSD, unit trace.
// Construction validates the invariants and eagerly eigendecomposes; tiny
// negative eigenvalues from round-off are clamped to zero and the spectrum
// renormalized.
class DensityState {
public:
    explicit DensityState(const Matrix& m);

    // Pure state from an amplitude vector (normalized internally).
    static DensityState pure(const CVector& psi);

    int dim() const { return dim_; }
    const Matrix& matrix() const { return mat_; }
    const RVector& eigenvalues() const { return evals_; }   // ascending, clamped
    const Matrix& eigenvectors() const { return evecs_; }   // columns match evals

    // f applied to the spectrum: V f(diag) V^dag
    Matrix apply_spectral(const std::function<double(double)>& f) const;
    // complex spectral power tau^z (eigenvalue^z, 0^z := 0)
    Matrix spectral_pow(cxd z) const;

private:
    DensityState() = default;
    int dim_ = 0;
    Matrix mat_;
    RVector evals_;
    Matrix evecs_;
};

// POVM: indexed family of PSD effects summing to the identity.
class Povm {
public:
    Povm(std::vector<Matrix> effects, std::vector<std::string> labels);
    static Povm trivial(int dim);                  // single effect = identity
    static Povm basis(int dim);                    // rank-1 computational basis

    int dim() const { return dim_; }
    std::size_t outcomes() const { return effects_.size(); }
    const Matrix& effect(std::size_t x) const { return effects_[x]; }
    const std::vector<Matrix>& effects() const { return effects_; }
    const std::vector<std::string>& labels() const { return labels_; }

private:
    int dim_ = 0;
    std::vector<Matrix> effects_;
    std::vector<std::string> labels_;
};

// Result bundle of an observational entropy evaluation (all values in nats).
struct EntropyReport {
    ExtReal s_oe;             // S_M^tau(rho) = S(tau) - D_M(rho||tau)
    ExtReal s_traditional;    // traditional OE, W_x = tr M_x
    double s_tau = 0.0;       // prior entropy S(tau)
    ExtReal d_m;              // D_M(rho||tau) = S(tau) - s_oe
    ProbVector p;             // outcome distribution of rho
    std::vector<double> volumes;  // V_x = tr(M_x tau) e^{S(tau)}
};

// Time series of entropies emitted by the experiments. One track per
// measurement label; each track optionally retains the per-time outcome
// distributions (used by the equilibration analyses).
struct SeriesPoint {
    double t = 0.0;
    ExtReal s_oe;
    ExtReal s_traditional;
    double s_tau = 0.0;
    double e_a = 0.0;
    double e_b = 0.0;
};

struct SeriesTrack {
    std::string label;
    std::vector<SeriesPoint> points;
    std::vector<std::vector<double>> probs;  // optional, per point
    std::vector<double> prior_probs;         // optional, q_x = tr M_x tau
    std::vector<long long> macro_ids;        // optional, classical definite-macrostate runs
};

struct EntropySeries {
    std::vector<SeriesTrack> tracks;
    const SeriesTrack& track(const std::string& label) const;
};

// ---- small linear algebra helpers used across modules ----

bool is_hermitian(const Matrix& m, double tol);
Matrix kron(const Matrix& a, const Matrix& b);
Matrix partial_trace_b(const Matrix& m, int da, int db);
Matrix partial_trace_a(const Matrix& m, int da, int db);
Matrix projector_from_columns(const Matrix& vecs, const std::vector<int>& cols);

} // namespace oe

#endif
