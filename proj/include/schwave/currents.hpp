/* currents.hpp
 *
 * Generic vector-field-method currents in double-null coordinates (u,v) for
 * spherically symmetric multipliers V = Vu(r) du + Vv(r) dv (vector), a radial
 * function q(r) and a radial 1-form m.
 *
 * Conventions (metric g = -4(1-mu) du dv + r^2 dOmega^2, psi = psi(u,v,omega)):
 *   dv r = 1-mu = -du r,  g_{uv} = -2(1-mu),  g^{uv} = -1/(2(1-mu)),
 *   raising:  A^u = -A_v/(2(1-mu)),  A^v = -A_u/(2(1-mu)).
 *
 * Energy-momentum tensor with optional defocusing potential (k = 0 or 1):
 *   T_ab[psi,k] = da psi db psi - g_ab/2 (dc psi d^c psi + 2k/(p+1)|psi|^{p+1})
 * current:
 *   P_a = T_ab[psi,k] X^b + q psi da psi - (da q) psi^2 / 2 + m_a psi^2 / 2
 * and its divergence splits as
 *   div P = box(psi) (X psi + q psi) - k/(p+1) div(X |psi|^{p+1}) + Q,
 *   Q = T_ab[psi,0] pi_X^ab + q d^a psi da psi + psi m_a d^a psi
 *       + (div m - box q) psi^2 / 2.
 *
 * The deformation contraction uses the closed formula for spherically
 * symmetric vector fields:
 *   T_ab pi_X^ab = (du psi)^2 d^u X^u + (dv psi)^2 d^v X^v
 *                  - |slash-nabla psi|^2 (d^v X_v + d^u X_u)/2
 *                  - (X_u - X_v)/(2r) (|slash-nabla psi|^2 - d^a psi da psi).
 */
#pragma once

#include <cmath>

#include "geometry.hpp"

namespace schwave {

// first-order jet of psi at a point: value, null derivatives, |slash-nabla psi|
struct UVJet {
  double psi = 0.0;
  double du = 0.0;
  double dv = 0.0;
  double ang = 0.0;
};

// multiplier data evaluated at one radius
struct MultiplierValues {
  double Vu = 0.0, Vv = 0.0;        // vector components (index up)
  double dVu = 0.0, dVv = 0.0;      // d/dr of the components
  double q = 0.0, dq = 0.0;         // function q and dq/dr
  double m_u = 0.0, m_v = 0.0;      // 1-form components (index down)
  double divm_minus_boxq = 0.0;     // div m - box q
};

// dc psi d^c psi
inline double grad_square(double one_mu, const UVJet& j) {
  return -j.du * j.dv / one_mu + j.ang * j.ang;
}

inline double deformation_contraction(double one_mu, double r, const UVJet& j,
                                      const MultiplierValues& mv) {
  // d^u X^u = -dv(X^u)/(2(1-mu)) = -dX^u/dr / 2 ; d^v X^v = dX^v/dr / 2
  double duXu = -0.5 * mv.dVu;
  double dvXv = 0.5 * mv.dVv;
  // X_u = -2(1-mu) X^v, X_v = -2(1-mu) X^u and
  // d^u X_u = d((1-mu)X^v)/dr,  d^v X_v = -d((1-mu)X^u)/dr
  double d_one_mu = (1.0 - one_mu) / r;  // d(1-mu)/dr = 2M/r^2 = mu/r
  double duX_u = d_one_mu * mv.Vv + one_mu * mv.dVv;
  double dvX_v = -(d_one_mu * mv.Vu + one_mu * mv.dVu);
  double X_u = -2.0 * one_mu * mv.Vv;
  double X_v = -2.0 * one_mu * mv.Vu;
  double gsq = grad_square(one_mu, j);
  return j.du * j.du * duXu + j.dv * j.dv * dvXv -
         0.5 * j.ang * j.ang * (dvX_v + duX_u) -
         (X_u - X_v) / (2.0 * r) * (j.ang * j.ang - gsq);
}

inline double current_Q(double one_mu, double r, const UVJet& j,
                        const MultiplierValues& mv) {
  double gsq = grad_square(one_mu, j);
  double m_dpsi = -0.5 / one_mu * (mv.m_u * j.dv + mv.m_v * j.du);
  return deformation_contraction(one_mu, r, j, mv) + mv.q * gsq +
         j.psi * m_dpsi + 0.5 * mv.divm_minus_boxq * j.psi * j.psi;
}

// T_{uu}, T_{vv}, T_{uv} for T[psi,k]
inline double T_uu(const UVJet& j) { return j.du * j.du; }
inline double T_vv(const UVJet& j) { return j.dv * j.dv; }
inline double T_uv(double one_mu, const UVJet& j, int k, double p) {
  double pot = (k != 0) ? 2.0 / (p + 1.0) * std::pow(std::abs(j.psi), p + 1.0)
                        : 0.0;
  return one_mu * (j.ang * j.ang + pot);
}

// covariant current components (index down)
inline double current_Pu(double one_mu, const UVJet& j,
                         const MultiplierValues& mv, int k, double p) {
  // X_b with index down contracted: T_u^b X_b is T_{ub} X^b
  double t = T_uu(j) * mv.Vu + T_uv(one_mu, j, k, p) * mv.Vv;
  double dq_u = -one_mu * mv.dq;  // du q = q'(r) du r
  return t + mv.q * j.psi * j.du - 0.5 * dq_u * j.psi * j.psi +
         0.5 * mv.m_u * j.psi * j.psi;
}

inline double current_Pv(double one_mu, const UVJet& j,
                         const MultiplierValues& mv, int k, double p) {
  double t = T_uv(one_mu, j, k, p) * mv.Vu + T_vv(j) * mv.Vv;
  double dq_v = one_mu * mv.dq;
  return t + mv.q * j.psi * j.dv - 0.5 * dq_v * j.psi * j.psi +
         0.5 * mv.m_v * j.psi * j.psi;
}

}  // namespace schwave
