#include "collar/taylor.hpp"

#include <atomic>
#include <cmath>
#include <map>
#include <mutex>

namespace collar {

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                  int threads) {
  int workers = effective_thread_count(threads);
  if (workers <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  const std::size_t chunk = 16;
  auto worker = [&]() {
    for (;;) {
      std::size_t begin = next.fetch_add(chunk);
      if (begin >= count) break;
      std::size_t end = std::min(begin + chunk, count);
      for (std::size_t i = begin; i < end; ++i) fn(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

int effective_thread_count(int requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::vector<MultiIndex> increasing_multi_indices(int vars, int len) {
  std::vector<MultiIndex> out;
  if (len == 0) {
    out.emplace_back(std::vector<int>{});
    return out;
  }
  if (vars <= 0) return out;
  std::vector<int> current(len, 0);
  for (;;) {
    out.emplace_back(current);
    int pos = len - 1;
    while (pos >= 0 && current[pos] == vars - 1) --pos;
    if (pos < 0) break;
    int v = current[pos] + 1;
    for (int i = pos; i < len; ++i) current[i] = v;
  }
  return out;
}

std::vector<std::pair<MultiIndex, MultiIndex>> slot_subsets(const MultiIndex& index,
                                                            int subset_size) {
  std::vector<std::pair<MultiIndex, MultiIndex>> out;
  int k = index.length();
  if (subset_size < 0 || subset_size > k) return out;
  std::vector<int> mask(k, 0);
  std::fill(mask.end() - subset_size, mask.end(), 1);
  // std::next_permutation over the mask enumerates slot subsets once each.
  do {
    std::vector<int> in, rest;
    for (int i = 0; i < k; ++i) (mask[i] ? in : rest).push_back(index[i]);
    out.emplace_back(MultiIndex(std::move(in)), MultiIndex(std::move(rest)));
  } while (std::next_permutation(mask.begin(), mask.end()));
  return out;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double exponent_factorial(const std::vector<int>& exps) {
  double f = 1.0;
  for (int e : exps) f *= factorial(e);
  return f;
}

JetSpace::JetSpace(int dim, int order) : dim_(dim), order_(order) {
  // Graded enumeration: all exponent vectors of total degree deg, for
  // deg = 0..order, each block in lexicographic order.
  std::vector<int> e(dim, 0);
  auto emit = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == dim - 1) {
      e[pos] = remaining;
      exponents_.push_back(e);
      return;
    }
    for (int v = remaining; v >= 0; --v) {
      e[pos] = v;
      self(self, pos + 1, remaining - v);
    }
  };
  for (int deg = 0; deg <= order; ++deg) {
    std::size_t before = exponents_.size();
    emit(emit, 0, deg);
    degrees_.resize(exponents_.size());
    for (std::size_t i = before; i < exponents_.size(); ++i)
      degrees_[i] = deg;
  }
  lookup_.reserve(exponents_.size() * 2);
  for (int idx = 0; idx < static_cast<int>(exponents_.size()); ++idx)
    lookup_[pack(exponents_[idx])] = idx;
  var_index_.assign(dim, 0);
  if (order >= 1) {
    for (int v = 0; v < dim; ++v) {
      std::vector<int> e(dim, 0);
      e[v] = 1;
      var_index_[v] = lookup_.at(pack(e));
    }
  }
  for (int ia = 0; ia < size(); ++ia) {
    for (int ib = 0; ib <= ia; ++ib) {
      if (degrees_[ia] + degrees_[ib] > order) continue;
      std::vector<int> sum(dim);
      for (int j = 0; j < dim; ++j) sum[j] = exponents_[ia][j] + exponents_[ib][j];
      int ic = lookup_.at(pack(sum));
      products_.push_back({ia, ib, ic});
    }
  }
}

std::int64_t JetSpace::pack(const std::vector<int>& exps) const {
  std::int64_t key = 0;
  for (int j = 0; j < dim_; ++j) key = key * (order_ + 1) + exps[j];
  return key;
}

int JetSpace::index_of(const std::vector<int>& exps) const {
  auto it = lookup_.find(pack(exps));
  if (it == lookup_.end())
    throw order_exceeded("multi-index degree exceeds jet order");
  return it->second;
}

const JetSpace& JetSpace::get(int dim, int order) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, const JetSpace*> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(dim, order);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, new JetSpace(dim, order)).first;
  }
  return *it->second;
}

TaylorScalar operator*(const TaylorScalar& a, const TaylorScalar& b) {
  const JetSpace& sp = a.space();
  TaylorScalar r(sp);
  const Vec& pa = a.c_;
  const Vec& pb = b.c_;
  Vec& pc = r.c_;
  for (const auto& t : sp.product_table()) {
    if (t[0] == t[1]) {
      pc[t[2]] += pa[t[0]] * pb[t[0]];
    } else {
      pc[t[2]] += pa[t[0]] * pb[t[1]] + pa[t[1]] * pb[t[0]];
    }
  }
  return r;
}

TaylorScalar compose_univariate(const Vec& g_coeffs, const TaylorScalar& u) {
  const JetSpace& sp = u.space();
  TaylorScalar w = u;
  w.coeffs()[0] = 0.0;  // the increment has no constant term
  int k = static_cast<int>(g_coeffs.size()) - 1;
  TaylorScalar r(sp, g_coeffs[k]);
  for (int j = k - 1; j >= 0; --j) {
    r = r * w;
    r.coeffs()[0] += g_coeffs[j];
  }
  return r;
}

TaylorScalar operator/(const TaylorScalar& a, const TaylorScalar& b) {
  double b0 = b.value();
  if (std::abs(b0) < kDivisionFloor)
    throw singular_evaluation("division by (near-)zero denominator");
  int k = b.space().order();
  Vec g(k + 1);
  double p = 1.0 / b0;
  for (int j = 0; j <= k; ++j) {
    g[j] = (j % 2 == 0 ? p : -p);
    p /= b0;
  }
  return a * compose_univariate(g, b);
}

TaylorScalar ts_sin(const TaylorScalar& u) {
  int k = u.space().order();
  double u0 = u.value();
  Vec g(k + 1);
  for (int j = 0; j <= k; ++j) {
    switch (j % 4) {
      case 0: g[j] = std::sin(u0); break;
      case 1: g[j] = std::cos(u0); break;
      case 2: g[j] = -std::sin(u0); break;
      default: g[j] = -std::cos(u0); break;
    }
    g[j] /= factorial(j);
  }
  return compose_univariate(g, u);
}

TaylorScalar ts_cos(const TaylorScalar& u) {
  int k = u.space().order();
  double u0 = u.value();
  Vec g(k + 1);
  for (int j = 0; j <= k; ++j) {
    switch (j % 4) {
      case 0: g[j] = std::cos(u0); break;
      case 1: g[j] = -std::sin(u0); break;
      case 2: g[j] = -std::cos(u0); break;
      default: g[j] = std::sin(u0); break;
    }
    g[j] /= factorial(j);
  }
  return compose_univariate(g, u);
}

TaylorScalar ts_tan(const TaylorScalar& u) { return ts_sin(u) / ts_cos(u); }

TaylorScalar ts_exp(const TaylorScalar& u) {
  int k = u.space().order();
  double e0 = std::exp(u.value());
  Vec g(k + 1);
  for (int j = 0; j <= k; ++j) g[j] = e0 / factorial(j);
  return compose_univariate(g, u);
}

TaylorScalar ts_log(const TaylorScalar& u) {
  double u0 = u.value();
  if (!(u0 > 0.0)) throw singular_evaluation("log of nonpositive value");
  int k = u.space().order();
  Vec g(k + 1);
  g[0] = std::log(u0);
  double p = 1.0;
  for (int j = 1; j <= k; ++j) {
    p /= u0;
    g[j] = (j % 2 == 1 ? p : -p) / j;
  }
  return compose_univariate(g, u);
}

TaylorScalar ts_sqrt(const TaylorScalar& u) {
  double u0 = u.value();
  if (!(u0 > 0.0)) throw singular_evaluation("sqrt of nonpositive value in jet");
  return ts_pow_real(u, 0.5);
}

TaylorScalar ts_atan(const TaylorScalar& u) {
  double u0 = u.value();
  int k = u.space().order();
  Vec g(k + 1);
  g[0] = std::atan(u0);
  if (k >= 1) {
    // Coefficients of 1/(1+(u0+w)^2) by univariate series inversion; the
    // antiderivative gives the atan coefficients.
    double d0 = 1.0 + u0 * u0;
    Vec q(k);
    q[0] = 1.0 / d0;
    for (int m = 1; m < k; ++m) {
      double acc = 2.0 * u0 * q[m - 1];
      if (m >= 2) acc += q[m - 2];
      q[m] = -acc / d0;
    }
    for (int j = 1; j <= k; ++j) g[j] = q[j - 1] / j;
  }
  return compose_univariate(g, u);
}

TaylorScalar ts_pow_int(const TaylorScalar& u, long long e) {
  const JetSpace& sp = u.space();
  if (e == 0) return TaylorScalar(sp, 1.0);
  bool invert = e < 0;
  unsigned long long m = invert ? -(unsigned long long)e : (unsigned long long)e;
  TaylorScalar acc(sp, 1.0);
  TaylorScalar base = u;
  while (m > 0) {
    if (m & 1ULL) acc = acc * base;
    m >>= 1;
    if (m > 0) base = base * base;
  }
  if (invert) return TaylorScalar(sp, 1.0) / acc;
  return acc;
}

TaylorScalar ts_pow_real(const TaylorScalar& u, double e) {
  double u0 = u.value();
  if (!(u0 > 0.0))
    throw singular_evaluation("power with non-integer exponent requires positive base");
  int k = u.space().order();
  Vec g(k + 1);
  double binom = 1.0;
  for (int j = 0; j <= k; ++j) {
    if (j > 0) binom *= (e - (j - 1)) / j;
    g[j] = binom * std::pow(u0, e - j);
  }
  return compose_univariate(g, u);
}

Jet Jet::from_taylor(Vec base_point, const TaylorScalar& t) {
  Jet j(std::move(base_point), t.space());
  const JetSpace& sp = t.space();
  for (int idx = 0; idx < sp.size(); ++idx)
    j.partials_[idx] = t.coeffs()[idx] * exponent_factorial(sp.exponent(idx));
  return j;
}

double Jet::derivative(const MultiIndex& index) const {
  return derivative(index.exponents(dim()));
}

double Jet::derivative(const std::vector<int>& exps) const {
  return partials_[space_->index_of(exps)];
}

Vec Jet::gradient() const {
  Vec g(dim());
  for (int v = 0; v < dim(); ++v) g[v] = partials_[space_->variable_index(v)];
  return g;
}

Mat Jet::hessian() const {
  Mat h(dim(), dim());
  for (int i = 0; i < dim(); ++i) {
    for (int j = i; j < dim(); ++j) {
      std::vector<int> e(dim(), 0);
      ++e[i];
      ++e[j];
      double v = derivative(e);
      h(i, j) = v;
      h(j, i) = v;
    }
  }
  return h;
}

TaylorScalar Jet::to_taylor() const {
  TaylorScalar t(*space_);
  for (int idx = 0; idx < space_->size(); ++idx)
    t.coeffs()[idx] = partials_[idx] / exponent_factorial(space_->exponent(idx));
  return t;
}

Jet Jet::rotated(const Mat& rotation) const {
  const JetSpace& sp = *space_;
  int n = dim();
  // Substitute x - p = Q y into the truncated polynomial: evaluate it on the
  // linear Taylor scalars xt_i = sum_j Q(i,j) y_j.
  std::vector<TaylorScalar> xt;
  xt.reserve(n);
  for (int i = 0; i < n; ++i) {
    TaylorScalar v(sp, 0.0);
    if (sp.order() >= 1)
      for (int j = 0; j < n; ++j) v.coeffs()[sp.variable_index(j)] = rotation(i, j);
    xt.push_back(v);
  }
  // Monomial powers built incrementally per variable.
  std::vector<std::vector<TaylorScalar>> powers(n);
  for (int i = 0; i < n; ++i) {
    powers[i].push_back(TaylorScalar(sp, 1.0));
    for (int d = 1; d <= sp.order(); ++d)
      powers[i].push_back(powers[i][d - 1] * xt[i]);
  }
  TaylorScalar source = to_taylor();
  TaylorScalar result(sp, 0.0);
  for (int idx = 0; idx < sp.size(); ++idx) {
    double c = source.coeffs()[idx];
    if (c == 0.0) continue;
    const std::vector<int>& e = sp.exponent(idx);
    TaylorScalar mono(sp, c);
    for (int i = 0; i < n; ++i)
      if (e[i] > 0) mono = mono * powers[i][e[i]];
    result = result + mono;
  }
  return Jet::from_taylor(x_, result);
}

}  // namespace collar
