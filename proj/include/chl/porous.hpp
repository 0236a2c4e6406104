#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace chl {

struct Interval {
  double a = 0.0;
  double b = 0.0;
};

// Finite union of disjoint closed intervals, sorted.  Unit-range sets live in
// [0,1]; images under coordinate changes may extend beyond it.
class PorousSet {
 public:
  PorousSet() = default;
  explicit PorousSet(std::vector<Interval> intervals, bool require_unit_range = true);

  const std::vector<Interval>& intervals() const { return ivs_; }
  bool empty() const { return ivs_.empty(); }
  double measure() const;
  double min_point() const;
  double max_point() const;

 private:
  std::vector<Interval> ivs_;
};

// One interval "a b" per line, decimal.
PorousSet parse_porous_set(std::istream& in);
std::string format_porous_set(const PorousSet& set);

struct PorosityVerdict {
  bool porous = true;
  // On failure, a window [witness_x, witness_x + witness_len] whose largest
  // set-free subinterval is shorter than nu times its length.
  double witness_x = 0.0;
  double witness_len = 0.0;
};

// Decides whether every window of length in [alpha0, alpha1] contains a
// set-free subinterval of relative length nu.  Exact up to 1e-9 boundary
// ties, which resolve toward "porous".  Requires 0 < nu < 1, 0 < alpha0 <=
// alpha1.
PorosityVerdict is_porous(const PorousSet& set, double nu, double alpha0, double alpha1);

// Independent brute-force check on windows with endpoints on a uniform grid.
PorosityVerdict porosity_grid_oracle(const PorousSet& set, double nu, double alpha0,
                                     double alpha1, double grid = 1e-4);

// Level-`depth` intervals of base-`base` expansions using only kept digits.
PorousSet cantor_iterate(int base, const std::vector<int>& kept_digits, int depth);

struct GapConstruction {
  PorousSet set;
  double nu_prime = 0.0;
};

// Repeatedly splits every block with a centered relative gap delta/T until
// the block width drops below (1 - 3 nu') e^{-2j}, for j = 1..depth, with
// nu' = e^{-2} delta / T.  The result is nu'-porous on scales
// [e^{-2 depth}, 1].
GapConstruction gap_construction(double T, double delta, int depth);

// Set + [-alpha, alpha], clipped to [0,1], merged.
PorousSet thicken(const PorousSet& set, double alpha);

struct DiffeoSpec {
  std::function<double(double)> psi;
  double sup_deriv = 1.0;      // bound on |psi'|
  double sup_inv_deriv = 1.0;  // bound on |1/psi'|
  double sup_second = 0.0;     // bound on |psi''|
};

// Endpoint image of the set under a strictly monotone map.  Throws when the
// sampled map is not strictly monotone.
PorousSet diffeo_image(const PorousSet& set, const DiffeoSpec& psi);

}  // namespace chl
