#include "prodexp/poly.hpp"

#include <stdexcept>
#include <unordered_map>

namespace prodexp {

Poly::Poly(std::vector<Elem> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

void Poly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Poly Poly::monomial(int degree, Elem coeff) {
  std::vector<Elem> c(degree + 1, 0);
  c[degree] = coeff;
  return Poly(std::move(c));
}

Poly Poly::cyclotomic_modulus(int n) {
  std::vector<Elem> c(n + 1, 0);
  c[0] = 1;
  c[n] = 1;
  return Poly(std::move(c));
}

Poly Poly::from_roots(std::span<const Elem> roots, const Field& field) {
  Poly result({1});
  for (Elem r : roots) result = poly_mul(result, Poly({r, 1}), field);
  return result;
}

Elem Poly::eval(Elem x, const Field& field) const {
  Elem acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = field.mul(acc, x) ^ *it;
  return acc;
}

Poly poly_add(const Poly& a, const Poly& b) {
  std::vector<Elem> c(std::max(a.coeffs().size(), b.coeffs().size()), 0);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[static_cast<int>(i)] ^ b[static_cast<int>(i)];
  return Poly(std::move(c));
}

Poly poly_mul(const Poly& a, const Poly& b, const Field& field) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Elem> c(a.coeffs().size() + b.coeffs().size() - 1, 0);
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
    if (a.coeffs()[i] == 0) continue;
    for (std::size_t j = 0; j < b.coeffs().size(); ++j) {
      c[i + j] ^= field.mul(a.coeffs()[i], b.coeffs()[j]);
    }
  }
  return Poly(std::move(c));
}

Poly poly_scale(const Poly& a, Elem c, const Field& field) {
  std::vector<Elem> out(a.coeffs());
  for (auto& v : out) v = field.mul(v, c);
  return Poly(std::move(out));
}

std::pair<Poly, Poly> poly_divmod(const Poly& a, const Poly& b, const Field& field) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  std::vector<Elem> rem(a.coeffs());
  const int db = b.degree();
  if (a.degree() < db) return {Poly{}, a};
  std::vector<Elem> quot(a.degree() - db + 1, 0);
  const Elem lead_inv = field.inv(b.coeffs().back());
  for (int i = a.degree(); i >= db; --i) {
    Elem c = rem[i];
    if (c == 0) continue;
    Elem factor = field.mul(c, lead_inv);
    quot[i - db] = factor;
    for (int j = 0; j <= db; ++j) rem[i - db + j] ^= field.mul(factor, b.coeffs()[j]);
  }
  return {Poly(std::move(quot)), Poly(std::move(rem))};
}

Poly poly_mul_mod_cyclic(const Poly& a, const Poly& b, int n, const Field& field) {
  std::vector<Elem> c(n, 0);
  for (int i = 0; i <= a.degree(); ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j <= b.degree(); ++j) c[(i + j) % n] ^= field.mul(a[i], b[j]);
  }
  return Poly(std::move(c));
}

Poly poly_reciprocal(const Poly& p) {
  std::vector<Elem> c(p.coeffs().rbegin(), p.coeffs().rend());
  return Poly(std::move(c));
}

MultiPoly::MultiPoly(int num_vars, int period) : num_vars_(num_vars), period_(period) {
  if (num_vars < 1 || period < 1) throw std::invalid_argument("MultiPoly needs num_vars >= 1 and period >= 1");
  long double space = 1;
  for (int i = 0; i < num_vars; ++i) space *= period;
  if (space > 9.0e18L) throw std::invalid_argument("MultiPoly exponent space does not fit a 64-bit key");
}

MultiPoly MultiPoly::constant(int num_vars, int period, Elem value) {
  MultiPoly p(num_vars, period);
  p.add_term(Exponents(num_vars, 0), value);
  return p;
}

MultiPoly MultiPoly::from_univariate(const Poly& p, int num_vars, int period, int var) {
  if (var < 0 || var >= num_vars) throw std::invalid_argument("variable index out of range");
  MultiPoly out(num_vars, period);
  Exponents e(num_vars, 0);
  for (int i = 0; i <= p.degree(); ++i) {
    if (p[i] == 0) continue;
    e[var] = i;
    out.add_term(e, p[i]);
  }
  return out;
}

std::uint64_t MultiPoly::pack(const Exponents& exps) const {
  if (static_cast<int>(exps.size()) != num_vars_) throw std::invalid_argument("exponent tuple length mismatch");
  std::uint64_t key = 0;
  for (int e : exps) {
    int r = e % period_;
    if (r < 0) r += period_;
    key = key * static_cast<std::uint64_t>(period_) + static_cast<std::uint64_t>(r);
  }
  return key;
}

void MultiPoly::unpack(std::uint64_t key, Exponents& exps) const {
  exps.resize(num_vars_);
  for (int i = num_vars_ - 1; i >= 0; --i) {
    exps[i] = static_cast<int>(key % static_cast<std::uint64_t>(period_));
    key /= static_cast<std::uint64_t>(period_);
  }
}

Elem MultiPoly::coeff(const Exponents& exps) const {
  auto it = terms_.find(pack(exps));
  return it == terms_.end() ? Elem{0} : it->second;
}

void MultiPoly::add_term(const Exponents& exps, Elem value) {
  if (value == 0) return;
  const auto key = pack(exps);
  auto [it, inserted] = terms_.try_emplace(key, value);
  if (!inserted) {
    it->second ^= value;
    if (it->second == 0) terms_.erase(it);
  }
}

void MultiPoly::set_packed(std::uint64_t key, Elem value) {
  if (value == 0) {
    terms_.erase(key);
  } else {
    terms_[key] = value;
  }
}

MultiPoly poly_mul_mod_ideal(const MultiPoly& a, const MultiPoly& b, const Field& field) {
  if (!a.same_shape(b)) throw std::invalid_argument("poly_mul_mod_ideal: mismatched variables or period");
  const int m = a.num_vars();
  const int n = a.period();

  std::vector<std::vector<int>> b_exps;
  std::vector<Elem> b_vals;
  b.for_each_term([&](const MultiPoly::Exponents& e, Elem v) {
    b_exps.push_back(e);
    b_vals.push_back(v);
  });

  long double space = 1;
  for (int i = 0; i < m; ++i) space *= n;
  const bool dense = space <= static_cast<long double>(1u << 24);
  std::vector<Elem> dense_acc(dense ? static_cast<std::size_t>(space) : 0, 0);
  std::unordered_map<std::uint64_t, Elem> sparse_acc;

  MultiPoly::Exponents sum(m);
  a.for_each_term([&](const MultiPoly::Exponents& ea, Elem va) {
    for (std::size_t t = 0; t < b_vals.size(); ++t) {
      std::uint64_t key = 0;
      for (int i = 0; i < m; ++i) {
        int s = ea[i] + b_exps[t][i];
        if (s >= n) s -= n;
        key = key * static_cast<std::uint64_t>(n) + static_cast<std::uint64_t>(s);
      }
      Elem prod = field.mul(va, b_vals[t]);
      if (dense) {
        dense_acc[key] ^= prod;
      } else {
        sparse_acc[key] ^= prod;
      }
    }
  });

  MultiPoly out(m, n);
  if (dense) {
    for (std::size_t key = 0; key < dense_acc.size(); ++key) {
      if (dense_acc[key]) out.set_packed(key, dense_acc[key]);
    }
  } else {
    for (const auto& [key, v] : sparse_acc) {
      if (v) out.set_packed(key, v);
    }
  }
  return out;
}

MultiPoly star_transform(const MultiPoly& p) {
  MultiPoly out(p.num_vars(), p.period());
  const int n = p.period();
  MultiPoly::Exponents e2(p.num_vars());
  p.for_each_term([&](const MultiPoly::Exponents& e, Elem v) {
    for (int i = 0; i < p.num_vars(); ++i) e2[i] = static_cast<int>((static_cast<long long>(e[i]) * (n - 1)) % n);
    out.add_term(e2, v);
  });
  return out;
}

std::vector<Elem> dft_evaluate(const MultiPoly& p, const Field& field) {
  if (p.num_vars() != 1) throw std::invalid_argument("dft_evaluate needs a univariate polynomial");
  const int n = p.period();
  if (n != field.group_order()) throw std::invalid_argument("dft_evaluate needs period q - 1");
  std::vector<Elem> out(n, 0);
  p.for_each_term([&](const MultiPoly::Exponents& e, Elem v) {
    for (int j = 0; j < n; ++j) {
      out[j] ^= field.mul(v, field.omega_pow(-static_cast<long long>(j) * e[0]));
    }
  });
  return out;
}

}  // namespace prodexp
