#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gaugeforge/expr.hpp"

namespace gaugeforge {

inline constexpr std::uint64_t kDefaultSampleSeed = 0x6761756765ULL;

/// Left side of the equation of motion d/dt(dL/dv) - dL/dx = 0, as an
/// expression in (t, x, v, a), together with the Lagrangian it came from.
struct ELResidual {
    Expr residual;
    Expr lagrangian;
};

enum class NullVerdict { CertifiedSymbolic, CertifiedNumeric, NotNull };

struct NullCertificate {
    NullVerdict verdict = NullVerdict::NotNull;
    Expr residual;               // simplified Euler-Lagrange residual
    double max_residual = 0.0;   // largest |residual| sampled (numeric tier)
    Bindings witness;            // first violating binding (NotNull only)
    double witness_value = 0.0;  // residual at the witness

    bool certified() const noexcept { return verdict != NullVerdict::NotNull; }
};

struct HelmholtzCondition {
    std::string name;
    bool passed = false;
    double max_violation = 0.0;
};

struct HelmholtzReport {
    std::vector<HelmholtzCondition> conditions;  // always three entries
    bool overall = false;
};

/// Applies the Euler-Lagrange operator to L(t, x, v). The residual is
/// simplified; for L built from a total time derivative it is literally 0.
/// Throws InvalidLagrangian if L depends on the acceleration variable.
ELResidual euler_lagrange(const Expr& L);

/// Two-tier null-Lagrangian certificate: symbolic when the simplified
/// residual is literal zero, otherwise numeric sampling of the residual at
/// n_samples bindings with (t,x,v,a) uniform in [-10,10] and every named
/// constant uniform in [-5,5]. The first sample exceeding tol in magnitude
/// becomes the witness of a NotNull verdict.
NullCertificate is_null(const Expr& L, int n_samples = 1000, double tol = 1e-9,
                        std::uint64_t seed = kDefaultSampleSeed);

/// Self-adjointness (variational-existence) conditions for a scalar
/// second-order ODE given as a residual expression Phi(t,x,v,a), affine in a:
///   nondegeneracy    dPhi/da bounded away from zero on the sample domain,
///   first-derivative dPhi/dv = d/dt(dPhi/da),
///   symmetry         d/dt of the first-derivative defect also vanishes
///                    (the x-symmetry counterpart is trivial for one degree
///                    of freedom and reduces to this identity).
/// Each condition is decided symbolically when possible, otherwise on 1000
/// samples at tolerance 1e-9. Throws NotSecondOrder when Phi has no or
/// nonlinear a-dependence.
HelmholtzReport helmholtz_check(const Expr& ode_residual,
                                std::uint64_t seed = kDefaultSampleSeed);

/// E = v*dL/dv - L, simplified. Coincides with the Hamiltonian only when L
/// carries no gauge or drive terms. Throws InvalidLagrangian if L depends
/// on the acceleration variable.
Expr energy_function(const Expr& L);

/// Per-sample value of dE/dt + dL/dt along a sampled trajectory, where E is
/// the energy function of L evaluated on the samples and dE/dt comes from
/// finite differences of that series: five-point fourth-order stencils where
/// the grid is uniform (centered in the interior, one-sided at the ends),
/// falling back to quadratic (second-order) stencils around a shortened
/// final step or when fewer than five samples exist. `constants` supplies
/// values for the named constants of L. Throws TrajectoryTooShort below 3
/// samples.
std::vector<double> energy_balance_residual(const Expr& L, const std::vector<double>& t,
                                            const std::vector<double>& x,
                                            const std::vector<double>& v,
                                            const Bindings& constants = {});

}  // namespace gaugeforge
