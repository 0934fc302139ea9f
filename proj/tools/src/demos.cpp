#include "monosplit/tools/demos.hpp"

#include <cmath>
#include <cstdio>

namespace monosplit::tools {

Vector projected_gradient_hyperplane(const Vector& lo, const Vector& hi, const Vector& u, double rho,
                                     double omega, long steps, double step) {
  const ConvexSet C = ConvexSet::hyperplane(u, rho);
  Vector x = Vector::Zero(lo.size());
  for (long n = 0; n < steps; ++n) {
    const Vector grad = 2.0 * omega * (x - C.project(x));
    x = (x - step * grad).cwiseMax(lo).cwiseMin(hi);
  }
  return x;
}

namespace {

Vector legendre_oracle() {
  const double s = 1.0 / std::sqrt(2.0);
  Matrix U(3, 2);
  U << 1, 0, 0, 1, s, s;
  Vector rho(3);
  rho << 1, 2, 0;
  return (U.transpose() * U).ldlt().solve(U.transpose() * rho);
}

std::vector<Demo> build() {
  std::vector<Demo> out;
  out.push_back(
      {"prob62",
       "two boxes coupled by (1/2)|x1 - x2|^2",
       "kind multivar_min\n"
       "primal 1 1\n"
       "dual 1\n"
       "op f 0 indicator_box lo=2 hi=3\n"
       "op f 1 indicator_box lo=0 hi=1\n"
       "op g 0 sq_dist a=0\n"
       "op ell 0 indicator_point c=0\n"
       "linop 0 0 identity\n"
       "linop 0 1 scalar -1\n",
       // Closest points of the disjoint intervals [2,3] and [0,1].
       [] { return Vector{{2.0, 1.0}}; },
       1e-6});
  const double s = 1.0 / std::sqrt(2.0);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g", s, s);
  out.push_back({"legendre",
                 "least-squares point of three lines in the plane",
                 std::string("kind common_zero\n"
                             "primal 2\n"
                             "dual 2 2 2\n"
                             "op A 0 zero\n"
                             "op B 0 normal_hyperplane u=1,0 rho=1\n"
                             "op B 1 normal_hyperplane u=0,1 rho=2\n"
                             "op B 2 normal_hyperplane u=") +
                     buf +
                     " rho=0\n"
                     "op S 0 scaled_identity c=1\n"
                     "op S 1 scaled_identity c=1\n"
                     "op S 2 scaled_identity c=1\n",
                 legendre_oracle, 1e-6});
  out.push_back({"example73",
                 "unit box as a hard constraint, squared distance to x1 + x2 = 3",
                 "kind feasibility\n"
                 "primal 2\n"
                 "dual 2 2\n"
                 "op set 0 indicator_box lo=0 hi=1\n"
                 "op penalty 0 hard\n"
                 "op set 1 indicator_hyperplane u=1,1 rho=3\n"
                 "op penalty 1 sq_norm omega=1\n",
                 [] {
                   return projected_gradient_hyperplane(Vector::Zero(2), Vector::Ones(2),
                                                        Vector{{1.0, 1.0}}, 3.0, 1.0, 1000000, 1e-3);
                 },
                 1e-5});
  out.push_back({"lasso1d",
                 "l1 shrinkage of b = (3, 0.2) with unit weight",
                 "kind multivar_min\n"
                 "primal 2\n"
                 "dual 2\n"
                 "op f 0 l1 w=1\n"
                 "op g 0 sq_dist a=3,0.2\n"
                 "op ell 0 indicator_point c=0\n"
                 "linop 0 0 identity\n",
                 [] {
                   const Vector b{{3.0, 0.2}};
                   return Vector((b.array().sign() * (b.array().abs() - 1.0).max(0.0)).matrix());
                 },
                 1e-6});
  return out;
}

}  // namespace

const std::vector<Demo>& demos() {
  static const std::vector<Demo> all = build();
  return all;
}

const Demo* find_demo(const std::string& name) {
  for (const auto& d : demos())
    if (d.name == name) return &d;
  return nullptr;
}

std::string demo_names() {
  std::string out;
  for (const auto& d : demos()) out += (out.empty() ? "" : ", ") + d.name;
  return out;
}

}  // namespace monosplit::tools
