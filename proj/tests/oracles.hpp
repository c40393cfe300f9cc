#pragma once

// Brute-force reference computations shared by the unit and acceptance tests.
// They avoid the library's decoders, ambiguity spaces and flat shortcuts.

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "prodexp/expansion.hpp"
#include "prodexp/tensor.hpp"

namespace prodexp::oracle {

// All words of C^(axis), built line by line from the code's member list.
inline std::vector<TensorWord> direction_members(const CodeFamily& family, int axis) {
  auto line_words = enumerate_codewords(linear_of(family.code(axis)));
  const Shape shape = family.shape();
  const std::size_t lines = line_count(shape, axis);
  std::vector<TensorWord> out;
  std::vector<std::size_t> choice(lines, 0);
  while (true) {
    TensorWord w(shape);
    for_each_line(shape, axis, [&](std::size_t line, std::size_t first, std::size_t stride) {
      set_line(w, axis, first, stride, line_words[choice[line]]);
    });
    out.push_back(std::move(w));
    std::size_t i = 0;
    for (; i < lines; ++i) {
      if (++choice[i] < line_words.size()) break;
      choice[i] = 0;
    }
    if (i == lines) return out;
  }
}

// Oracle: every tuple (a_1, ..., a_m) of the product of the C^(i); records the
// cheapest cost for each reachable sum. Keys are the raw entry vectors.
inline std::map<std::vector<Elem>, Fraction> tuple_oracle(const CodeFamily& family) {
  const int m = family.dims();
  std::vector<std::vector<TensorWord>> members;
  std::vector<std::vector<Fraction>> costs;
  for (int a = 0; a < m; ++a) {
    members.push_back(direction_members(family, a));
    std::vector<Fraction> c;
    for (const auto& w : members.back()) c.push_back(line_weight(w, a));
    costs.push_back(std::move(c));
  }
  std::map<std::vector<Elem>, Fraction> best;
  std::vector<std::size_t> idx(m, 0);
  while (true) {
    TensorWord sum(family.shape());
    Fraction cost = 0;
    for (int a = 0; a < m; ++a) {
      sum = sum + members[a][idx[a]];
      cost += costs[a][idx[a]];
    }
    auto it = best.find(sum.entries());
    if (it == best.end()) {
      best.emplace(sum.entries(), cost);
    } else if (cost < it->second) {
      it->second = cost;
    }
    int i = 0;
    for (; i < m; ++i) {
      if (++idx[i] < members[i].size()) break;
      idx[i] = 0;
    }
    if (i == m) return best;
  }
}

inline Fraction oracle_rho(const CodeFamily& family) {
  auto best = tuple_oracle(family);
  const Fraction n_cells(static_cast<long long>(shape_size(family.shape())));
  std::optional<Fraction> rho;
  for (const auto& [entries, cost] : best) {
    int wt = weight(entries);
    if (wt == 0) continue;
    Fraction r = Fraction(wt) / n_cells / cost;
    if (!rho || r < *rho) rho = r;
  }
  return *rho;
}

inline TensorWord word_at(const Shape& shape, int q, std::uint64_t idx) {
  TensorWord w(shape);
  for (std::size_t j = w.size(); j-- > 0;) {
    w[j] = static_cast<Elem>(idx % q);
    idx /= q;
  }
  return w;
}

inline std::uint64_t word_count(const CodeFamily& fam) {
  std::uint64_t v = 1;
  for (std::size_t i = 0; i < shape_size(fam.shape()); ++i) v *= fam.field().size();
  return v;
}

// Oracle: product code as every word whose lines all lie in their codes.
inline std::vector<TensorWord> oracle_product(const CodeFamily& fam) {
  std::vector<std::set<Word>> members;
  for (int a = 0; a < fam.dims(); ++a) {
    auto cw = enumerate_codewords(linear_of(fam.code(a)));
    members.emplace_back(cw.begin(), cw.end());
  }
  std::vector<TensorWord> out;
  const std::uint64_t total = word_count(fam);
  for (std::uint64_t i = 0; i < total; ++i) {
    TensorWord w = word_at(fam.shape(), fam.field().size(), i);
    bool ok = true;
    for (int a = 0; a < fam.dims() && ok; ++a) {
      for_each_line(fam.shape(), a, [&](std::size_t, std::size_t first, std::size_t stride) {
        ok = ok && members[a].count(line_values(w, a, first, stride)) > 0;
      });
    }
    if (ok) out.push_back(std::move(w));
  }
  return out;
}

// Oracle expectation: punctured codes built by restricting every product codeword.
inline Fraction oracle_expectation(const TensorWord& w, const std::vector<WeightedFlat>& flats,
                            const std::vector<TensorWord>& product) {
  Fraction e = 0;
  for (const auto& wf : flats) {
    const TensorWord r = restrict(w, wf.flat);
    int best = static_cast<int>(r.size());
    for (const auto& c : product) best = std::min(best, hamming_distance(r, restrict(c, wf.flat)));
    e += wf.weight * Fraction(best) / Fraction(static_cast<long long>(r.size()));
  }
  return e;
}

inline Fraction oracle_rho_r(const CodeFamily& fam, int k) {
  const auto product = oracle_product(fam);
  const auto flats = enumerate_flats(fam.shape(), k);
  const Fraction N(static_cast<long long>(shape_size(fam.shape())));
  std::optional<Fraction> best;
  for (std::uint64_t i = 0; i < word_count(fam); ++i) {
    const TensorWord w = word_at(fam.shape(), fam.field().size(), i);
    int d = static_cast<int>(w.size());
    for (const auto& c : product) d = std::min(d, hamming_distance(w, c));
    if (d == 0) continue;
    const Fraction r = oracle_expectation(w, flats, product) / (Fraction(d) / N);
    if (!best || r < *best) best = r;
  }
  return *best;
}

inline std::vector<TensorWord> oracle_direction(const CodeFamily& fam, int axis) {
  auto lines = enumerate_codewords(linear_of(fam.code(axis)));
  std::set<Word> allowed(lines.begin(), lines.end());
  std::vector<TensorWord> out;
  for (std::uint64_t i = 0; i < word_count(fam); ++i) {
    TensorWord w = word_at(fam.shape(), fam.field().size(), i);
    bool ok = true;
    for_each_line(fam.shape(), axis, [&](std::size_t, std::size_t first, std::size_t stride) {
      ok = ok && allowed.count(line_values(w, axis, first, stride)) > 0;
    });
    if (ok) out.push_back(std::move(w));
  }
  return out;
}

// Oracle agreement ratio with fractions throughout, uniform over [m] and [m]^2.
inline Fraction oracle_rho_a(const CodeFamily& fam) {
  const int m = fam.dims();
  const auto product = oracle_product(fam);
  std::vector<std::vector<TensorWord>> dirs;
  for (int a = 0; a < m; ++a) dirs.push_back(oracle_direction(fam, a));
  const Fraction N(static_cast<long long>(shape_size(fam.shape())));
  std::optional<Fraction> best;
  std::vector<std::size_t> idx(m, 0);
  while (true) {
    Fraction pairs = 0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) pairs += Fraction(hamming_distance(dirs[i][idx[i]], dirs[j][idx[j]])) / N;
    pairs /= Fraction(m * m);
    if (pairs > 0) {
      std::optional<Fraction> den;
      for (const auto& c : product) {
        Fraction s = 0;
        for (int i = 0; i < m; ++i) s += line_weight(dirs[i][idx[i]] + c, i);
        s /= Fraction(m);
        if (!den || s < *den) den = s;
      }
      const Fraction r = pairs / *den;
      if (!best || r < *best) best = r;
    }
    int i = 0;
    for (; i < m; ++i) {
      if (++idx[i] < dirs[i].size()) break;
      idx[i] = 0;
    }
    if (i == m) return *best;
  }
}

}  // namespace prodexp::oracle
