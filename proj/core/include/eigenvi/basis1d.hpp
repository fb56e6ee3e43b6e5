#pragma once

#include <span>
#include <string>
#include <string_view>

namespace eigenvi {

enum class BasisKind { HermiteWeighted, Legendre, Fourier, LaguerreWeighted };

enum class SupportKind { RealLine, Interval, Circle, HalfLine };

/// Closed set on which a one-dimensional family is defined. Unbounded ends are
/// stored as +/- infinity.
struct Support {
  SupportKind kind;
  double lo;
  double hi;

  bool contains(double z) const;
  bool bounded() const;
  bool operator==(const Support&) const = default;
};

/// A one-dimensional orthonormal family. Indices are 1-based: phi_1 is the
/// lowest-order function, so that q = phi_1^2 is the base density of the
/// family (the standard normal for the Hermite kind).
///
/// | kind             | support  | phi_{n+1}                                  |
/// |------------------|----------|--------------------------------------------|
/// | HermiteWeighted  | R        | (sqrt(2 pi) n!)^{-1/2} e^{-z^2/4} He_n(z)  |
/// | Legendre         | [-1, 1]  | sqrt((2n+1)/2) P_n(z)                      |
/// | Fourier          | [0, 2pi] | 1/sqrt(2pi), cos(m t)/sqrt(pi), sin(m t)/sqrt(pi), ... |
/// | LaguerreWeighted | [0, inf) | e^{-z/2} L_n(z)                            |
///
/// All values are produced by normalized three-term recurrences, so no
/// factorials are formed and high orders do not overflow.
class BasisFamily {
 public:
  static constexpr int kDefaultMaxOrder = 64;

  explicit BasisFamily(BasisKind kind, int max_order = kDefaultMaxOrder);

  static BasisFamily hermite(int max_order = kDefaultMaxOrder) {
    return BasisFamily(BasisKind::HermiteWeighted, max_order);
  }
  static BasisFamily legendre(int max_order = kDefaultMaxOrder) {
    return BasisFamily(BasisKind::Legendre, max_order);
  }
  static BasisFamily fourier(int max_order = kDefaultMaxOrder) {
    return BasisFamily(BasisKind::Fourier, max_order);
  }
  static BasisFamily laguerre(int max_order = kDefaultMaxOrder) {
    return BasisFamily(BasisKind::LaguerreWeighted, max_order);
  }

  BasisKind kind() const { return kind_; }
  const Support& support() const { return support_; }
  int max_order() const { return max_order_; }

  /// phi_k(z). Throws IndexError for k < 1, CapacityError for k > max_order()
  /// and DomainError for z outside the support.
  double eval(int k, double z) const;

  /// d phi_k / dz (d/dtheta for the Fourier kind).
  double eval_grad(int k, double z) const;

  /// values[j] = phi_{j+1}(z) for every j < values.size(); derivs, when
  /// non-empty, must have the same length and receives the derivatives.
  void tabulate(double z, std::span<double> values, std::span<double> derivs = {}) const;

  /// Same as tabulate() without the domain check; used by quadrature code that
  /// has already validated its nodes.
  void tabulate_unchecked(double z, std::span<double> values,
                          std::span<double> derivs = {}) const;

  bool operator==(const BasisFamily&) const = default;

 private:
  void check(int k, double z) const;

  BasisKind kind_;
  Support support_;
  int max_order_;
};

double eval_basis(const BasisFamily& family, int k, double z);
double eval_basis_grad(const BasisFamily& family, int k, double z);

/// One term of z * phi_k expanded in the basis. An absent term has index 0 and
/// coefficient 0.
struct RecurrenceTerm {
  int index;
  double coeff;
};

struct ZPhiRecurrence {
  RecurrenceTerm up;    // sqrt(k) on phi_{k+1}
  RecurrenceTerm down;  // sqrt(k-1) on phi_{k-1}
};

/// z phi_k(z) = sqrt(k) phi_{k+1}(z) + sqrt(k-1) phi_{k-1}(z). Hermite only;
/// other kinds throw NotImplementedError.
ZPhiRecurrence recurrence_z_phi(const BasisFamily& family, int k);

std::string_view to_string(BasisKind kind);
BasisKind basis_kind_from_string(std::string_view name);
Support natural_support(BasisKind kind);

}  // namespace eigenvi
