#pragma once

// Element residual of the coupled problem, templated on the number of fluids
// and on the scalar type (double, or a dual number seeded on the element dofs).

#include <string>

#include "poromech/assembly.hpp"
#include "poromech/constitutive.hpp"
#include "poromech/errors.hpp"
#include "poromech/material_point.hpp"

namespace poromech::fem::detail {

inline std::string where(int e, int q) { return "element " + std::to_string(e) + ", point " + std::to_string(q); }

/// Runs f, rethrowing material errors with the element and point attached.
template <class Fn>
auto with_context(int e, int q, Fn&& f) {
    try {
        return f();
    } catch (const NonPositiveJacobian& x) {
        throw NonPositiveJacobian(x.jacobian, where(e, q));
    } catch (const DegeneratePhase& x) {
        throw DegeneratePhase(where(e, q) + ": " + x.what());
    } catch (const ClosureNoConvergence& x) {
        throw ClosureNoConvergence(where(e, q) + ": " + x.what());
    } catch (const OutOfRangeDensity& x) {
        throw OutOfRangeDensity(where(e, q) + ": " + x.what());
    }
}

template <class S>
struct PointFields {
    Mat2<S> F;
    S J;
    Vec2<S> u;
    std::array<S, constitutive::max_fluids> P0{};
};

/// Displacement, deformation gradient and densities at a point. `ue` holds 18
/// displacement values node-major, `pe` 4·nf densities corner-major.
template <class S>
PointFields<S> interpolate(const QpGeometry& g, const S* ue, const S* pe, int nf) {
    PointFields<S> r;
    Mat2<S> H;
    for (int a = 0; a < 9; ++a) {
        for (int i = 0; i < 2; ++i) {
            const S& ua = ue[2 * a + i];
            r.u[i] = r.u[i] + g.N2[a] * ua;
            H(i, 0) = H(i, 0) + ua * g.dN2[a][0];
            H(i, 1) = H(i, 1) + ua * g.dN2[a][1];
        }
    }
    r.F = Mat2<S>::identity() + H;
    r.J = det(r.F);
    for (int f = 0; f < nf; ++f)
        for (int b = 0; b < 4; ++b) r.P0[f] = r.P0[f] + g.N1[b] * pe[b * nf + f];
    return r;
}

/// Element residual (unscaled, without boundary loads). out has 18 + 8·NF entries.
template <int NF, class S>
void element_residual(const Problem& pb, const ElementGeometry& geo, int e, const S* x_local, const double* P0_old,
                      double inv_dt, S* out) {
    using namespace constitutive;
    const Mixture& mix = pb.mixture;
    const S* ue = x_local;
    const S* pe = x_local + 18;
    const S* he = x_local + 18 + 4 * NF;
    S* ru = out;
    S* rp = out + 18;
    S* rh = out + 18 + 4 * NF;
    for (int k = 0; k < 18 + 8 * NF; ++k) out[k] = S(0.0);

    const Vec2<double> gvec = pb.gravity_vector();
    // Upwind transport: A[f][a][b] = ∫ k ∇N_a·C⁻¹∇N_b, with P₀ taken at the upstream corner of each pair.
    const bool upwind = pb.upwind_mobility;
    std::array<std::array<std::array<S, 4>, 4>, (NF > 0 ? NF : 1)> A{};
    for (int q = 0; q < 9; ++q) {
        const QpGeometry& g = geo.qp[q];
        const auto pf = interpolate(g, ue, pe, NF);
        const PointState<S> st = with_context(e, q, [&] {
            kinematics::require_positive_jacobian(pf.J);
            return evaluate_point(mix, pf.J, pf.P0);
        });
        const Mat2<S> T = total_piola(pf.F, mix, st);
        S rho0 = S(mix.phi0s * pb.solid_density);
        for (int f = 0; f < NF; ++f) rho0 = rho0 + pf.P0[f];
        for (int a = 0; a < 9; ++a)
            for (int i = 0; i < 2; ++i)
                ru[2 * a + i] = ru[2 * a + i] +
                                g.dV * (T(i, 0) * g.dN2[a][0] + T(i, 1) * g.dN2[a][1] - rho0 * (gvec[i] * g.N2[a]));
        if constexpr (NF > 0) {
            const Mat2<S> Cinv = inverse(transpose(pf.F) * pf.F);
            const S gx = gvec[0] * (g.X[0] + pf.u[0]) + gvec[1] * (g.X[1] + pf.u[1]);
            for (int f = 0; f < NF; ++f) {
                const S eta_q = st.mu[f] - gx;
                Vec2<S> grad_eta;
                for (int b = 0; b < 4; ++b) {
                    const S& hb = he[b * NF + f];
                    grad_eta[0] = grad_eta[0] + hb * g.dN1[b][0];
                    grad_eta[1] = grad_eta[1] + hb * g.dN1[b][1];
                }
                const S k = permeability(mix.fluids[static_cast<std::size_t>(f)].perm, st.rho[f]);
                if (upwind) {
                    for (int a = 0; a < 4; ++a) {
                        Vec2<S> ga;
                        ga[0] = S(g.dN1[a][0]);
                        ga[1] = S(g.dN1[a][1]);
                        const Vec2<S> wa = Cinv * ga;
                        for (int b = a + 1; b < 4; ++b)
                            A[f][a][b] = A[f][a][b] + (g.dV * k) * (wa[0] * g.dN1[b][0] + wa[1] * g.dN1[b][1]);
                    }
                } else {
                    const Vec2<S> w = Cinv * grad_eta;
                    const S mob = g.dV * pf.P0[f] * k;
                    for (int b = 0; b < 4; ++b)
                        rp[b * NF + f] = rp[b * NF + f] + mob * (w[0] * g.dN1[b][0] + w[1] * g.dN1[b][1]);
                }
                for (int b = 0; b < 4; ++b) rh[b * NF + f] = rh[b * NF + f] - (g.dV * g.N1[b]) * eta_q;
            }
        }
    }
    if (upwind) {
        for (int f = 0; f < NF; ++f)
            for (int a = 0; a < 4; ++a)
                for (int b = a + 1; b < 4; ++b) {
                    // Flux into b from a is −A_ab(η_a − η_b)·P₀; row a receives the opposite.
                    const S t = A[f][a][b] * (he[a * NF + f] - he[b * NF + f]);
                    const S& P_up = value_of(t) < 0.0 ? pe[a * NF + f] : pe[b * NF + f];
                    const S flux = P_up * t;
                    rp[b * NF + f] = rp[b * NF + f] + flux;
                    rp[a * NF + f] = rp[a * NF + f] - flux;
                }
    }
    for (int b = 0; b < 4; ++b)
        for (int f = 0; f < NF; ++f) {
            const int i = b * NF + f;
            rp[i] = rp[i] + (geo.lumped[b] * inv_dt) * (pe[i] - P0_old[i]);
            rh[i] = rh[i] + geo.lumped[b] * he[i];
        }
}

}  // namespace poromech::fem::detail
