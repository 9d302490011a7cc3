#ifndef RPF_RSDE_HPP
#define RPF_RSDE_HPP

#include "rpf/noise.hpp"
#include "rpf/rough_path.hpp"

#include <functional>
#include <optional>

namespace rpf {

// Coefficients of dY = b dt + sigma dM + g d(compensated measure) + f dX.
// All evaluated at (t, y). df is optional; finite differences are used when absent.
struct CoefficientSet {
    int state_dim = 1;
    std::function<Vec(double, const Vec&)> b;     // m
    std::function<Mat(double, const Vec&)> sigma; // m x dM
    std::function<Mat(double, const Vec&)> f;     // m x d
    // df[c] = elementwise derivative of f with respect to y_c (m x d each)
    std::function<std::vector<Mat>(double, const Vec&)> df;
    std::function<Vec(double, const Vec&, const Vec&)> g; // (t, y, mark) -> m
    double fd_eps = 1e-6;

    std::vector<Mat> f_jacobian(double t, const Vec& y) const;
};

struct ControlledSolution {
    GridPath y;       // m
    GridPath y_prime; // m*d, row-major flattening of f(t, Y)
    bool aborted = false;
    double abort_time = 0.0;
    std::size_t rough_dim = 0;

    // remainder R_{s,t} = delta Y - Y'_s delta X, exact on the grid
    Vec remainder(const RoughPath& rp, std::size_t i, std::size_t j) const;
};

struct WindowDiagnostic {
    double t0, t1;
    double y_pvar;       // p-variation of Y over the window
    double yprime_pvar;  // p-variation of Y'
    double remainder_var; // p/2-variation of the remainder
};
std::vector<WindowDiagnostic> remainder_diagnostics(const ControlledSolution& sol,
                                                    const RoughPath& rp, double p,
                                                    int dyadic_levels = 3);

// Compensated Riemann sum of (y, y') against rp over a window; output is a path
// on the same grid, zero up to the window start and frozen after its end.
GridPath rough_stochastic_integral(const GridPath& y, const GridPath& y_prime,
                                   const RoughPath& rp, IndexWindow window);
GridPath rough_stochastic_integral(const GridPath& y, const GridPath& y_prime,
                                   const RoughPath& rp);

// Explicit left-point one-step scheme: per cell,
//   Y+ = Y + b dt + sigma dM + (events - compensator) + f dX + Df f S.
// The level-2 term is dropped when use_level2 is false (classical route).
ControlledSolution solve_rsde(const CoefficientSet& coeffs, const Vec& y0, const RoughPath& rp,
                              const MartingaleSample* M, const MarkedEventStream* events,
                              bool use_level2 = true);

// Classical Euler route: the driver consumed as a plain integrator, no level-2 term.
GridPath solve_doubly_sde(const CoefficientSet& coeffs, const Vec& y0, const GridPath& x_path,
                          const MartingaleSample* M, const MarkedEventStream* events);

inline constexpr double kDivergenceGuard = 1e8;

} // namespace rpf

#endif
