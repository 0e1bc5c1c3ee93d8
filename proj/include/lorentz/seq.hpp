#pragma once

#include <Eigen/Dense>
#include <vector>

namespace lorentz {

using Index = Eigen::Index;

// Finitely supported real sequence, stored dense up to the last nonzero index.
// Entries are 1-indexed in the math sense: coeff(1) is the first entry.
// Trailing zeros are trimmed on construction; two sequences are equal iff all
// logical coefficients agree, so padding with zeros never changes anything.
class Seq {
 public:
  Seq() = default;
  // Validates finiteness of every entry and trims trailing zeros.
  explicit Seq(Eigen::ArrayXd values);
  explicit Seq(const std::vector<double>& values);

  static Seq zero() { return Seq(); }
  // e_i, the i-th coordinate vector (i >= 1).
  static Seq unit(Index i);
  static Seq ones(Index n);
  // value on positions {first, ..., first+len-1}, zero elsewhere (first >= 1).
  static Seq flat_block(Index first, Index len, double value);

  // Dense storage up to the last nonzero index (empty for the zero sequence).
  const Eigen::ArrayXd& values() const { return values_; }
  // Index of the last nonzero entry; 0 for the zero sequence.
  Index length() const { return values_.size(); }
  // Logical 1-indexed coefficient; 0 beyond length().
  double coeff(Index i) const;
  bool is_zero() const { return values_.size() == 0; }

  std::vector<Index> support() const;   // ascending 1-indexed positions
  Index support_size() const;
  Index support_min() const;            // 0 for the zero sequence
  Index support_max() const { return length(); }

  friend Seq operator+(const Seq& a, const Seq& b);
  friend Seq operator*(double c, const Seq& a);
  friend bool operator==(const Seq& a, const Seq& b);

 private:
  Eigen::ArrayXd values_;
};

// mu_u(lambda) = #{ i : |u(i)| > lambda }.  Requires lambda > 0.
Index distribution(const Seq& u, double lambda);

// Nonincreasing rearrangement u*: the moduli of u sorted descending, placed on
// {1..support_size}.  Convention: u*(1) is the largest modulus, equivalently
// u*(j) = min{ lambda >= 0 : mu_u(lambda) <= j-1 }.
//
// Conformance note.  An alternative reading defines u*(j) via
// min{ lambda > 0 : mu_u(lambda) <= j }, which shifts everything by one place:
// for u = (3,2,1) it yields u*(1) = 2 instead of 3.  This library uses the
// sorted-descending convention throughout; it is the one under which the exact
// dyadic transfer identity ||a||_{p,inf} = 2^{n/p} ||A||_{L^{p,inf}} holds.
Seq rearrange(const Seq& u);

// Support rearrangement u^diamond: the sorted moduli of u placed back on the
// original support positions in ascending support order.  If supp(u) is
// contained in {n+1..m} then u^diamond(j) = u*(j-n) for those j.
// Ties are placed stably (by original index order of the sorted moduli).
Seq rearrange_on_support(const Seq& u);

// Head projection P_m: keep entries 1..m, zero the rest.  Requires m >= 0.
Seq project_head(const Seq& u, Index m);
// Tail projection R_m: zero entries 1..m, keep the rest.  Requires m >= 0.
Seq project_tail(const Seq& u, Index m);

}  // namespace lorentz
