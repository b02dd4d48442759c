#include "spek/kernels.hpp"

#include <algorithm>
#include <bit>

#include "spek/capacity.hpp"
#include "spek/error.hpp"

namespace spek::kernels {

namespace {

int result_base(const Relation& a, const Relation& b) {
  if (a.dom_arity() + a.cod_arity() == 0) return b.base();
  return a.base();
}

}  // namespace

Relation compose_serial(const Relation& first, const Relation& second) {
  const std::uint64_t mid = first.cod_size();
  const int base = first.dom_arity() > 0 ? first.base() : second.base();
  return Relation::from_predicate(base, first.dom_arity(), second.cod_arity(),
                                  [&](std::uint64_t a, std::uint64_t c) {
                                    for (std::uint64_t b = 0; b < mid; ++b)
                                      if (first.contains(a, b) && second.contains(b, c)) return true;
                                    return false;
                                  });
}

Relation compose_parallel(const Relation& first, const Relation& second) {
  const std::int64_t rows = static_cast<std::int64_t>(first.dom_size());
  const std::uint64_t mid = first.cod_size();
  const int base = first.dom_arity() > 0 ? first.base() : second.base();
  Relation shape(base, first.dom_arity(), second.cod_arity());
  const std::size_t out_words = shape.words_per_row();
  std::vector<std::uint64_t> words(static_cast<std::size_t>(rows) * out_words, 0);
  const std::size_t in_words = first.words_per_row();

#pragma omp parallel for schedule(static) if (rows >= 64)
  for (std::int64_t a = 0; a < rows; ++a) {
    std::uint64_t* out = words.data() + static_cast<std::size_t>(a) * out_words;
    auto row = first.row(static_cast<std::uint64_t>(a));
    for (std::size_t w = 0; w < in_words; ++w) {
      std::uint64_t bits = row[w];
      while (bits) {
        const std::uint64_t b = w * 64 + static_cast<std::uint64_t>(std::countr_zero(bits));
        bits &= bits - 1;
        if (b >= mid) break;
        auto src = second.row(b);
        for (std::size_t k = 0; k < out_words; ++k) out[k] |= src[k];
      }
    }
  }
  return Relation::from_words(base, first.dom_arity(), second.cod_arity(), std::move(words));
}

Relation tensor_serial(const Relation& left, const Relation& right) {
  const int base = result_base(left, right);
  std::vector<std::pair<Tuple, Tuple>> pairs;
  for (const auto& [x1, y1] : left.pairs())
    for (const auto& [x2, y2] : right.pairs()) {
      Tuple x = x1, y = y1;
      x.insert(x.end(), x2.begin(), x2.end());
      y.insert(y.end(), y2.begin(), y2.end());
      pairs.emplace_back(std::move(x), std::move(y));
    }
  return Relation::from_pairs(base, left.dom_arity() + right.dom_arity(), left.cod_arity() + right.cod_arity(),
                              pairs);
}

Relation tensor_parallel(const Relation& left, const Relation& right) {
  const int base = result_base(left, right);
  Relation shape(base, left.dom_arity() + right.dom_arity(), left.cod_arity() + right.cod_arity());
  const std::size_t out_words = shape.words_per_row();
  const std::uint64_t dom2 = right.dom_size();
  const std::uint64_t cod1 = left.cod_size();
  const std::uint64_t cod2 = right.cod_size();
  const std::int64_t rows = static_cast<std::int64_t>(shape.dom_size());
  std::vector<std::uint64_t> words(static_cast<std::size_t>(rows) * out_words, 0);

#pragma omp parallel for schedule(static) if (rows >= 64)
  for (std::int64_t r = 0; r < rows; ++r) {
    const std::uint64_t a1 = static_cast<std::uint64_t>(r) / dom2;
    const std::uint64_t a2 = static_cast<std::uint64_t>(r) % dom2;
    std::uint64_t* out = words.data() + static_cast<std::size_t>(r) * out_words;
    for (std::uint64_t b1 = 0; b1 < cod1; ++b1) {
      if (!left.contains(a1, b1)) continue;
      for (std::uint64_t b2 = 0; b2 < cod2; ++b2) {
        if (!right.contains(a2, b2)) continue;
        const std::uint64_t c = b1 * cod2 + b2;
        out[c / 64] |= std::uint64_t{1} << (c % 64);
      }
    }
  }
  return Relation::from_words(base, shape.dom_arity(), shape.cod_arity(), std::move(words));
}

bool BoolTensor::any() const {
  return std::any_of(cells.begin(), cells.end(), [](std::uint8_t c) { return c != 0; });
}

BoolTensor make_tensor(int base, std::vector<int> vars) {
  BoolTensor t;
  t.base = base;
  const std::uint64_t size = ipow(static_cast<std::uint64_t>(base), static_cast<int>(vars.size()));
  require_cells(size, "tensor");
  t.vars = std::move(vars);
  t.cells.assign(static_cast<std::size_t>(size), 0);
  return t;
}

namespace {

int position(const std::vector<int>& vars, int v) {
  auto it = std::find(vars.begin(), vars.end(), v);
  return it == vars.end() ? -1 : static_cast<int>(it - vars.begin());
}

std::vector<std::uint64_t> strides_of(const BoolTensor& t) {
  std::vector<std::uint64_t> s(t.vars.size(), 1);
  for (int i = static_cast<int>(t.vars.size()) - 2; i >= 0; --i)
    s[static_cast<std::size_t>(i)] = s[static_cast<std::size_t>(i) + 1] * static_cast<std::uint64_t>(t.base);
  return s;
}

void check_join_inputs(const BoolTensor& a, const BoolTensor& b, std::span<const int> keep) {
  if (a.base != b.base) throw TypeMismatch("join of tensors over different bases");
  for (int v : keep)
    if (position(a.vars, v) < 0 && position(b.vars, v) < 0) throw Error("join: kept variable not present");
}

}  // namespace

BoolTensor join_serial(const BoolTensor& a, const BoolTensor& b, std::span<const int> keep) {
  check_join_inputs(a, b, keep);
  BoolTensor out = make_tensor(a.base, std::vector<int>(keep.begin(), keep.end()));
  const auto out_strides = strides_of(out);
  const std::size_t na = a.vars.size(), nb = b.vars.size();
  for (std::uint64_t i = 0; i < a.cells.size(); ++i) {
    if (!a.cells[i]) continue;
    std::vector<int> va(na);
    std::uint64_t rest = i;
    for (int k = static_cast<int>(na) - 1; k >= 0; --k) {
      va[static_cast<std::size_t>(k)] = static_cast<int>(rest % static_cast<std::uint64_t>(a.base));
      rest /= static_cast<std::uint64_t>(a.base);
    }
    for (std::uint64_t j = 0; j < b.cells.size(); ++j) {
      if (!b.cells[j]) continue;
      std::vector<int> vb(nb);
      std::uint64_t r2 = j;
      for (int k = static_cast<int>(nb) - 1; k >= 0; --k) {
        vb[static_cast<std::size_t>(k)] = static_cast<int>(r2 % static_cast<std::uint64_t>(b.base));
        r2 /= static_cast<std::uint64_t>(b.base);
      }
      bool agree = true;
      for (std::size_t k = 0; k < nb && agree; ++k) {
        const int pa = position(a.vars, b.vars[k]);
        if (pa >= 0 && va[static_cast<std::size_t>(pa)] != vb[k]) agree = false;
      }
      if (!agree) continue;
      std::uint64_t index = 0;
      for (std::size_t k = 0; k < out.vars.size(); ++k) {
        const int pa = position(a.vars, out.vars[k]);
        const int v = pa >= 0 ? va[static_cast<std::size_t>(pa)]
                              : vb[static_cast<std::size_t>(position(b.vars, out.vars[k]))];
        index += static_cast<std::uint64_t>(v) * out_strides[k];
      }
      out.cells[index] = 1;
    }
  }
  return out;
}

BoolTensor join_parallel(const BoolTensor& a, const BoolTensor& b, std::span<const int> keep) {
  check_join_inputs(a, b, keep);
  BoolTensor out = make_tensor(a.base, std::vector<int>(keep.begin(), keep.end()));
  const auto sa = strides_of(a);
  const auto sb = strides_of(b);
  const std::uint64_t base = static_cast<std::uint64_t>(a.base);

  // Summed variables: present in a or b but not kept.
  std::vector<int> summed;
  for (int v : a.vars)
    if (position(out.vars, v) < 0 && std::find(summed.begin(), summed.end(), v) == summed.end()) summed.push_back(v);
  for (int v : b.vars)
    if (position(out.vars, v) < 0 && std::find(summed.begin(), summed.end(), v) == summed.end()) summed.push_back(v);

  auto stride_in = [](const BoolTensor& t, const std::vector<std::uint64_t>& s, int v) -> std::uint64_t {
    const int p = position(t.vars, v);
    return p < 0 ? 0 : s[static_cast<std::size_t>(p)];
  };
  const std::size_t nk = out.vars.size(), ns = summed.size();
  std::vector<std::uint64_t> keep_a(nk), keep_b(nk), sum_a(ns), sum_b(ns);
  for (std::size_t k = 0; k < nk; ++k) {
    keep_a[k] = stride_in(a, sa, out.vars[k]);
    keep_b[k] = stride_in(b, sb, out.vars[k]);
  }
  for (std::size_t k = 0; k < ns; ++k) {
    sum_a[k] = stride_in(a, sa, summed[k]);
    sum_b[k] = stride_in(b, sb, summed[k]);
  }
  const std::uint64_t inner = ipow(base, static_cast<int>(ns));
  require_cells(inner * out.cells.size(), "join workspace");
  const std::int64_t outer = static_cast<std::int64_t>(out.cells.size());

#pragma omp parallel for schedule(static) if (outer >= 256)
  for (std::int64_t r = 0; r < outer; ++r) {
    std::uint64_t off_a = 0, off_b = 0, rest = static_cast<std::uint64_t>(r);
    for (int k = static_cast<int>(nk) - 1; k >= 0; --k) {
      const std::uint64_t v = rest % base;
      rest /= base;
      off_a += v * keep_a[static_cast<std::size_t>(k)];
      off_b += v * keep_b[static_cast<std::size_t>(k)];
    }
    std::uint8_t hit = 0;
    for (std::uint64_t s = 0; s < inner && !hit; ++s) {
      std::uint64_t ia = off_a, ib = off_b, srest = s;
      for (int k = static_cast<int>(ns) - 1; k >= 0; --k) {
        const std::uint64_t v = srest % base;
        srest /= base;
        ia += v * sum_a[static_cast<std::size_t>(k)];
        ib += v * sum_b[static_cast<std::size_t>(k)];
      }
      hit = a.cells[ia] & b.cells[ib];
    }
    out.cells[static_cast<std::size_t>(r)] = hit;
  }
  return out;
}

BoolTensor project(const BoolTensor& a, std::span<const int> keep) {
  BoolTensor unit;
  unit.base = a.base;
  unit.cells = {1};
  return join_parallel(a, unit, keep);
}

}  // namespace spek::kernels
