#pragma once

#include <map>
#include <string>
#include <vector>

#include "frontlab/util.hpp"

namespace frontlab::flows {

enum class FlowKind {
    zero,
    cellular,
    shear,
    cats_eye,
    two_scale,
    half_log_lip,
    unsteady_cellular,
    abc,
    kolmogorov,
};

/// A named periodic velocity field from the catalog. All flows are 1-periodic
/// in every spatial coordinate; the 3D trigonometric flows are stated on a
/// 2π-periodic cell in the literature and are relabeled here by x -> 2πx with
/// velocity values unchanged. Immutable after construction, safe to share
/// across threads.
class Flow {
  public:
    /// Factory from catalog name plus named parameters. Unknown names or
    /// parameters are ConfigErrors.
    static Flow make(const std::string& name,
                     const std::map<std::string, double>& params = {});

    /// Extension point for user-defined fields: behaves like a catalog entry
    /// but evaluates the supplied callables. Stream/jacobian may be null
    /// (jacobian then falls back to finite differences).
    static Flow make_custom(std::string name, int dim, bool time_dependent,
                            Vec2 (*velocity)(Vec2, double),
                            double (*stream)(Vec2, double) = nullptr);

    const std::string& name() const { return name_; }
    FlowKind kind() const { return kind_; }
    int dim() const { return dim_; }
    bool time_dependent() const { return time_dependent_; }
    /// False only for the half-log-Lipschitz field, whose derivative is
    /// unbounded near the half-integer lattice.
    bool lipschitz() const { return lipschitz_; }
    bool has_stream() const { return dim_ == 2; }

    /// W^{1,∞} bound: max of sup|V| and sup|DV| (spectral norm), closed form
    /// for the trigonometric flows, else sampled on a 256-per-axis grid with
    /// a 1.05 safety factor.
    double k0() const { return k0_; }
    /// sup_x,t |V(x,t)| (closed form or sampled); drives CFL and thresholds.
    double max_speed() const { return max_speed_; }

    double param(const std::string& key, double fallback) const;
    const std::map<std::string, double>& params() const { return params_; }
    /// "k1=v1;k2=v2" with keys sorted; empty string when no parameters.
    std::string params_string() const;

    Vec2 velocity(Vec2 x, double t = 0.0) const;
    Vec3 velocity3(Vec3 x, double t = 0.0) const;
    /// Stream function H with V = (-H_y, H_x). UnsupportedError for dim=3.
    double stream(Vec2 x, double t = 0.0) const;
    /// Spatial derivative DV (analytic; finite differences for
    /// half_log_lip and custom flows).
    Mat2 jacobian(Vec2 x, double t = 0.0) const;

  private:
    Flow() = default;
    void finalize();  // fills k0_/max_speed_ (closed form or sampled)

    std::string name_;
    FlowKind kind_ = FlowKind::zero;
    int dim_ = 2;
    bool time_dependent_ = false;
    bool lipschitz_ = true;
    double k0_ = 0.0;
    double max_speed_ = 0.0;
    std::map<std::string, double> params_;

    // cached parameter values for the hot paths
    double delta_ = 0.5;                       // cats_eye
    double abc_a_ = 1.0, abc_b_ = 1.0, abc_c_ = 1.0;
    double uamp_ = 1.0, ub_ = 0.5, uomega_ = kTwoPi, uholder_ = 1.0;

    Vec2 (*custom_velocity_)(Vec2, double) = nullptr;
    double (*custom_stream_)(Vec2, double) = nullptr;

  public:
    /// Horizontal phase shift α(t) = B·sin(ω t) of the unsteady cellular
    /// flow (0 for steady flows). Exposed for the solver's table-based fast
    /// path.
    double phase_shift(double t) const;
    double unsteady_amplitude() const { return uamp_; }
};

/// Names accepted by Flow::make, in catalog order.
std::vector<std::string> catalog_names();

struct StagnationPoint {
    Vec2 location;        // in [0,1)^2
    double residual;      // |V| at the refined point
    bool degenerate;      // |det DV| <= tolerance
    double jacobian_det;
};

struct StagnationScan {
    std::vector<StagnationPoint> points;
    bool continuum_suspected = false;
};

/// Newton-refined zeros of V(.,t) started from a seeds_per_axis^2 grid,
/// deduplicated modulo the lattice. tol <= 0 selects the scale-aware default
/// 1e-6*K0^2 for the degeneracy test of det DV.
StagnationScan find_stagnation_points(const Flow& flow, double t,
                                      int seeds_per_axis, double tol = 0.0);

struct ValidationReport {
    std::array<double, 3> mean_velocity{0, 0, 0};
    double max_divergence = 0.0;
    double periodicity_defect = 0.0;
    double mean_tol = 1e-8;
    double div_tol = 0.0;
    double period_tol = 1e-12;
    bool passes = false;
};

/// Structural checks: spatial mean (quadrature), central-difference
/// divergence, periodicity under lattice translations. Report-only.
ValidationReport validate_flow(const Flow& flow);

/// K0 as stored on the flow (closed form where available, else sampled).
double lipschitz_bound(const Flow& flow);

}  // namespace frontlab::flows
