#include "poromech/constitutive.hpp"

#include <stdexcept>

namespace poromech::constitutive {

namespace {
template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}
}  // namespace

std::string model_name(const FluidModel& m) {
    return std::visit(overloaded{[](const IdealGasParams&) { return std::string("ideal_gas"); },
                                 [](const VdWParams&) { return std::string("vdw"); },
                                 [](const IncompressibleLiquidParams&) { return std::string("incompressible_liquid"); },
                                 [](const ConstantBulkFluidParams&) { return std::string("constant_bulk"); }},
                      m);
}

std::string model_name(const SolidModel& m) {
    return std::holds_alternative<NeoHookeanParams>(m) ? "neo_hookean" : "linear_elastic";
}

void validate(const NeoHookeanParams& p) {
    require(p.mu > 0.0, "neo-Hookean: mu must be positive");
    require(p.lambda + p.mu > 0.0, "neo-Hookean: lambda + mu must be positive");
}
void validate(const LinearElasticParams& p) {
    require(p.mu > 0.0, "linear elastic: mu must be positive");
    require(p.lambda + p.mu > 0.0, "linear elastic: lambda + mu must be positive");
}
void validate(const IdealGasParams& p) {
    require(p.R > 0.0 && p.T > 0.0 && p.xi > 0.0, "ideal gas: R, T, xi must be positive");
    require(p.molar_mass > 0.0, "ideal gas: molar_mass must be positive");
}
void validate(const VdWParams& p) {
    require(p.a > 0.0 && p.b > 0.0 && p.R > 0.0 && p.T > 0.0, "vdw: a, b, R, T must be positive");
    require(p.c > 0.0 && p.molar_mass > 0.0, "vdw: c and molar_mass must be positive");
}
void validate(const IncompressibleLiquidParams& p) { require(p.rho_tilde > 0.0, "liquid: rho_tilde must be positive"); }
void validate(const ConstantBulkFluidParams& p) {
    require(p.K_f > 0.0 && p.rho_ref > 0.0, "constant-bulk fluid: K_f and rho_ref must be positive");
}
void validate(const PermeabilityParams& p) {
    require(p.g > 0.0, "permeability: g must be positive");
    if (p.k_tilde)
        require(*p.k_tilde > 0.0, "permeability: hydraulic conductivity must be positive");
    else
        require(p.kappa > 0.0 && p.viscosity > 0.0, "permeability: kappa and viscosity must be positive");
}
void validate(const SolidModel& m) {
    std::visit([](const auto& p) { validate(p); }, m);
}
void validate(const FluidModel& m) {
    std::visit([](const auto& p) { validate(p); }, m);
}

double fluid_energy(const FluidModel& model, double rho) { return evaluate_fluid(model, rho).W; }
double fluid_pressure(const FluidModel& model, double rho) { return evaluate_fluid(model, rho).p; }
double fluid_bulk_potential(const FluidModel& model, double rho) { return evaluate_fluid(model, rho).mu; }

double chemical_potential(const FluidModel& model, const kinematics::PhaseState& state, double J, double pore_pressure,
                          double gravity_potential) {
    if (const auto* liq = std::get_if<IncompressibleLiquidParams>(&model))
        return pore_pressure / liq->rho_tilde - gravity_potential;
    const double rho = kinematics::true_density(state.P0, J, state.phi);
    return evaluate_fluid(model, rho).mu - gravity_potential;
}

Vec2<double> fluid_flux(const FluidModel& model, const kinematics::PhaseState& state, const Vec2<double>& grad_mu,
                        const PermeabilityParams& perm, const Vec2<double>& gravity) {
    const double rho = is_incompressible(model) ? std::get<IncompressibleLiquidParams>(model).rho_tilde : state.rho;
    const double P = state.phi * rho;
    const double k = permeability(perm, rho);
    return Vec2<double>{{-P * k * (grad_mu[0] - gravity[0]), -P * k * (grad_mu[1] - gravity[1])}};
}

Mat2<double> linearized_stress(const Mat2<double>& eps, double p, const LinearizedParams& params, double phi_f) {
    return (2.0 * params.mu_tilde) * eps + (params.lambda_tilde * trace(eps) - phi_f * p) * Mat2<double>::identity();
}

double dissipation_density(const Vec2<double>& grad_eta, double P, const Mat2<double>& K) {
    return P * dot(grad_eta, K * grad_eta);
}

}  // namespace poromech::constitutive
