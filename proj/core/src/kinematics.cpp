#include "poromech/kinematics.hpp"

namespace poromech::kinematics {

DeformationState deformation_gradient(const Mat2<double>& grad_u) {
    DeformationState s;
    s.grad_u = grad_u;
    s.F = Mat2<double>::identity() + grad_u;
    s.J = det(s.F);
    require_positive_jacobian(s.J);
    return s;
}

Mat2<double> pull_permeability(const Mat2<double>& k_current, const Mat2<double>& F, double J) {
    require_positive_jacobian(J);
    const Mat2<double> Finv = inverse(F);
    return J * (Finv * k_current * transpose(Finv));
}

Mat2<double> push_permeability(const Mat2<double>& K_ref, const Mat2<double>& F, double J) {
    require_positive_jacobian(J);
    return (1.0 / J) * (F * K_ref * transpose(F));
}

}  // namespace poromech::kinematics
