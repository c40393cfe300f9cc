#include "prodexp/linalg.hpp"

#include <stdexcept>

namespace prodexp {

RowEchelon row_reduce(Matrix rows, const Field& field) {
  RowEchelon out;
  if (rows.empty()) return out;
  const int cols = static_cast<int>(rows.front().size());
  int r = 0;
  for (int c = 0; c < cols && r < static_cast<int>(rows.size()); ++c) {
    int pivot = -1;
    for (int i = r; i < static_cast<int>(rows.size()); ++i) {
      if (rows[i][c] != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(rows[r], rows[pivot]);
    const Elem scale = field.inv(rows[r][c]);
    for (auto& v : rows[r]) v = field.mul(v, scale);
    for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      const Elem f = rows[i][c];
      for (int j = c; j < cols; ++j) rows[i][j] ^= field.mul(f, rows[r][j]);
    }
    out.pivots.push_back(c);
    ++r;
  }
  rows.resize(r);
  out.rows = std::move(rows);
  return out;
}

int rank(const Matrix& rows, const Field& field) {
  return static_cast<int>(row_reduce(rows, field).pivots.size());
}

Matrix null_space(const Matrix& rows, int cols, const Field& field) {
  RowEchelon ech = row_reduce(rows, field);
  std::vector<int> pivot_row(cols, -1);
  for (std::size_t i = 0; i < ech.pivots.size(); ++i) pivot_row[ech.pivots[i]] = static_cast<int>(i);
  Matrix basis;
  for (int free = 0; free < cols; ++free) {
    if (pivot_row[free] >= 0) continue;
    Word v(cols, 0);
    v[free] = 1;
    for (std::size_t i = 0; i < ech.pivots.size(); ++i) {
      // Characteristic 2: x_pivot = -a * x_free = a * x_free.
      v[ech.pivots[i]] = ech.rows[i][free];
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<Word> solve(const Matrix& a, const Word& b, int cols, const Field& field) {
  if (a.size() != b.size()) throw std::invalid_argument("solve: row count mismatch");
  Matrix aug;
  aug.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    Word row(a[i]);
    row.push_back(b[i]);
    aug.push_back(std::move(row));
  }
  RowEchelon ech = row_reduce(std::move(aug), field);
  Word x(cols, 0);
  for (std::size_t i = 0; i < ech.pivots.size(); ++i) {
    if (ech.pivots[i] == cols) return std::nullopt;
    x[ech.pivots[i]] = ech.rows[i][cols];
  }
  return x;
}

Elem dot(std::span<const Elem> a, std::span<const Elem> b, const Field& field) {
  Elem acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc ^= field.mul(a[i], b[i]);
  return acc;
}

int weight(std::span<const Elem> v) {
  int w = 0;
  for (Elem e : v) w += e != 0;
  return w;
}

int hamming_distance(std::span<const Elem> a, std::span<const Elem> b) {
  int d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

}  // namespace prodexp
