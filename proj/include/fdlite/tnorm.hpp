#ifndef FDLITE_TNORM_HPP
#define FDLITE_TNORM_HPP

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "fdlite/degree.hpp"

namespace fdlite {

/// The three fundamental continuous t-norms.
enum class TNorm { godel, product, lukasiewicz };

inline std::string to_string(TNorm k) {
  switch (k) {
    case TNorm::godel: return "godel";
    case TNorm::product: return "product";
    case TNorm::lukasiewicz: return "lukasiewicz";
  }
  return "?";
}

inline TNorm tnorm_from_string(std::string_view s) {
  if (s == "godel" || s == "g") return TNorm::godel;
  if (s == "product" || s == "p") return TNorm::product;
  if (s == "lukasiewicz" || s == "l" || s == "luk") return TNorm::lukasiewicz;
  throw std::invalid_argument("unknown t-norm '" + std::string(s) + "'");
}

/// Fuzzy conjunction d (x) e.
inline Degree conj(TNorm k, const Degree& d, const Degree& e) {
  switch (k) {
    case TNorm::godel:
      return d <= e ? d : e;
    case TNorm::product:
      return Degree::from_raw(d.raw() * e.raw());
    case TNorm::lukasiewicz: {
      mpq_class v = d.raw() + e.raw() - 1;
      return v > 0 ? Degree::from_raw(std::move(v)) : Degree::zero();
    }
  }
  throw std::logic_error("bad t-norm");
}

/// The residuum d => e, the unique adjoint of the t-norm:
/// conj(f, d) <= e iff f <= resid(d, e). Equals 1 whenever d <= e.
inline Degree resid(TNorm k, const Degree& d, const Degree& e) {
  if (d <= e) return Degree::one();
  switch (k) {
    case TNorm::godel:
      return e;
    case TNorm::product:
      return Degree::from_raw(e.raw() / d.raw());
    case TNorm::lukasiewicz:
      return Degree::from_raw(1 - d.raw() + e.raw());
  }
  throw std::logic_error("bad t-norm");
}

/// Negation (-) d := d => 0. Annihilating for Goedel and product,
/// involutive (1 - d) for Lukasiewicz.
inline Degree neg(TNorm k, const Degree& d) {
  if (k == TNorm::lukasiewicz) return Degree::from_raw(1 - d.raw());
  return d.is_zero() ? Degree::one() : Degree::zero();
}

/// Left fold of conj over a list; the empty conjunction is 1.
inline Degree conj_fold(TNorm k, std::span<const Degree> ds) {
  Degree acc = Degree::one();
  for (const Degree& d : ds) acc = conj(k, acc, d);
  return acc;
}

}  // namespace fdlite

#endif
