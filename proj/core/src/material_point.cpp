#include "poromech/material_point.hpp"

#include <cmath>
#include <stdexcept>

namespace poromech::constitutive {

void validate(const Mixture& mix) {
    validate(mix.solid);
    if (!(mix.phi0s > 0.0 && mix.phi0s <= 1.0)) throw std::invalid_argument("solid volume fraction must lie in (0,1]");
    if (mix.fluids.size() > max_fluids) throw std::invalid_argument("too many fluid phases");
    double sum = mix.phi0s;
    int compressible = 0;
    int liquids = 0;
    for (const auto& f : mix.fluids) {
        validate(f.model);
        validate(f.perm);
        sum += f.phi0;
        if (is_incompressible(f.model))
            ++liquids;
        else
            ++compressible;
    }
    if (!mix.fluids.empty() && compressible == 0)
        throw std::invalid_argument("a mixture with fluids needs at least one compressible fluid");
    if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("referential volume fractions must sum to 1");
    if (liquids > 0 && mix.vf_kind != kinematics::VolumeFractionKind::UnsaturatedMixed)
        throw std::invalid_argument("incompressible liquids require the unsaturated volume-fraction model");
    if (mix.vf_kind == kinematics::VolumeFractionKind::UnsaturatedMixed && liquids == 0)
        throw std::invalid_argument("the unsaturated volume-fraction model needs an incompressible liquid");
}

namespace {
std::array<double, max_fluids> to_array(std::span<const double> P0) {
    if (P0.size() > max_fluids) throw std::invalid_argument("too many fluid densities");
    std::array<double, max_fluids> a{};
    for (std::size_t i = 0; i < P0.size(); ++i) a[i] = P0[i];
    return a;
}
}  // namespace

PointState<double> evaluate_point(const Mixture& mix, const Mat2<double>& F, std::span<const double> P0) {
    if (static_cast<int>(P0.size()) != mix.n_fluids()) throw std::invalid_argument("one density per fluid expected");
    return evaluate_point<double>(mix, det(F), to_array(P0));
}

Mat2<double> total_piola(const Mat2<double>& F, const Mixture& mix, std::span<const double> P0) {
    return total_piola(F, mix, evaluate_point(mix, F, P0));
}

double total_energy_density(const Mat2<double>& F, const Mixture& mix, std::span<const double> P0) {
    return total_energy_density(F, mix, evaluate_point(mix, F, P0));
}

}  // namespace poromech::constitutive
