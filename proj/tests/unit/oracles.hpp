/* Copyright 2026 The Y2Seq Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef Y2S_TESTS_ORACLES_HPP_
#define Y2S_TESTS_ORACLES_HPP_

// Plain-loop reference computations shared by the unit and acceptance tests.
// They deliberately avoid the library's own helpers.

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace oracle {

using Sent = std::vector<std::string>;

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// h' = (1 - z) h + z tanh(W_h x + U_h (r * h) + b_h)
struct Gru {
  int in = 0, hid = 0;
  std::vector<double> wz, uz, bz, wr, ur, br, wh, uh, bh;  // row-major [hid, in] / [hid, hid]

  std::vector<double> step(const std::vector<double>& x, const std::vector<double>& h) const {
    std::vector<double> z(hid), r(hid), out(hid);
    for (int i = 0; i < hid; ++i) {
      double az = bz[i], ar = br[i];
      for (int j = 0; j < in; ++j) {
        az += wz[i * in + j] * x[j];
        ar += wr[i * in + j] * x[j];
      }
      for (int j = 0; j < hid; ++j) {
        az += uz[i * hid + j] * h[j];
        ar += ur[i * hid + j] * h[j];
      }
      z[i] = sigmoid(az);
      r[i] = sigmoid(ar);
    }
    for (int i = 0; i < hid; ++i) {
      double a = bh[i];
      for (int j = 0; j < in; ++j) a += wh[i * in + j] * x[j];
      for (int j = 0; j < hid; ++j) a += uh[i * hid + j] * r[j] * h[j];
      out[i] = (1.0 - z[i]) * h[i] + z[i] * std::tanh(a);
    }
    return out;
  }
};

inline std::map<Sent, int> grams(const Sent& s, int n) {
  std::map<Sent, int> m;
  for (int i = 0; i + n <= static_cast<int>(s.size()); ++i) {
    m[Sent(s.begin() + i, s.begin() + i + n)]++;
  }
  return m;
}

inline double bleu(const Sent& c, const std::vector<Sent>& refs, int n) {
  if (c.empty()) return 0.0;
  double prod = 1.0;
  for (int k = 1; k <= n; ++k) {
    auto cg = grams(c, k);
    int num = 0, den = 0;
    for (auto& [g, cnt] : cg) {
      int best = 0;
      for (auto& r : refs) {
        auto rg = grams(r, k);
        auto it = rg.find(g);
        if (it != rg.end()) best = std::max(best, it->second);
      }
      num += std::min(cnt, best);
      den += cnt;
    }
    if (num == 0) return 0.0;
    prod *= static_cast<double>(num) / den;
  }
  // closest reference length, shorter wins ties
  int r = -1;
  for (auto& ref : refs) {
    int len = static_cast<int>(ref.size());
    if (r < 0 || std::abs(len - (int)c.size()) < std::abs(r - (int)c.size()) ||
        (std::abs(len - (int)c.size()) == std::abs(r - (int)c.size()) && len < r)) {
      r = len;
    }
  }
  double bp = (int)c.size() >= r ? 1.0 : std::exp(1.0 - double(r) / c.size());
  return bp * std::pow(prod, 1.0 / n);
}

// LCS by exhaustive recursion with memo on (i, j).
inline int lcs(const Sent& a, const Sent& b) {
  std::vector<std::vector<int>> t(a.size() + 1, std::vector<int>(b.size() + 1, 0));
  for (int i = (int)a.size() - 1; i >= 0; --i)
    for (int j = (int)b.size() - 1; j >= 0; --j)
      t[i][j] = a[i] == b[j] ? 1 + t[i + 1][j + 1] : std::max(t[i + 1][j], t[i][j + 1]);
  return t[0][0];
}

inline double rouge_l(const Sent& c, const std::vector<Sent>& refs, double beta = 1.2) {
  double best = 0.0;
  for (auto& r : refs) {
    int l = lcs(c, r);
    if (l == 0 || c.empty() || r.empty()) continue;
    double p = double(l) / c.size(), rec = double(l) / r.size();
    best = std::max(best, (1 + beta * beta) * p * rec / (rec + beta * beta * p));
  }
  return best;
}

inline double cider(const std::vector<Sent>& cands, const std::vector<std::vector<Sent>>& refs) {
  const double n_docs = static_cast<double>(refs.size());
  double total = 0.0;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    double per_n = 0.0;
    for (int n = 1; n <= 4; ++n) {
      auto vec = [&](const Sent& s) {
        std::map<Sent, double> v;
        auto g = grams(s, n);
        double len = 0;
        for (auto& kv : g) len += kv.second;
        for (auto& [gram, cnt] : g) {
          int df = 0;
          for (auto& set : refs) {
            bool hit = false;
            for (auto& r : set) hit = hit || grams(r, n).count(gram) > 0;
            df += hit ? 1 : 0;
          }
          v[gram] = cnt / len * std::log(n_docs / std::max(1, df));
        }
        return v;
      };
      auto cv = vec(cands[i]);
      double sum = 0.0;
      for (auto& r : refs[i]) {
        auto rv = vec(r);
        double dot = 0, a = 0, b = 0;
        for (auto& kv : cv) a += kv.second * kv.second;
        for (auto& kv : rv) b += kv.second * kv.second;
        for (auto& kv : cv) {
          auto it = rv.find(kv.first);
          if (it != rv.end()) dot += kv.second * it->second;
        }
        if (a > 0 && b > 0) sum += dot / std::sqrt(a * b);
      }
      per_n += sum / refs[i].size();
    }
    total += 10.0 * per_n / 4.0;
  }
  return total / cands.size();
}

// Full sort by (distance, index) done with an O(n^2) selection loop.
inline std::vector<int> rank(const std::vector<double>& q, const std::vector<std::vector<double>>& g) {
  std::vector<double> d(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    double s = 0;
    for (std::size_t k = 0; k < q.size(); ++k) s += (q[k] - g[i][k]) * (q[k] - g[i][k]);
    d[i] = s;
  }
  std::vector<int> order;
  std::vector<bool> used(g.size(), false);
  for (std::size_t step = 0; step < g.size(); ++step) {
    int best = -1;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (used[i]) continue;
      if (best < 0 || d[i] < d[best]) best = static_cast<int>(i);
    }
    used[best] = true;
    order.push_back(best);
  }
  return order;
}

inline double rr_at_k(const std::vector<std::vector<int>>& orders,
                      const std::vector<std::set<int>>& rel, int k) {
  double hits = 0;
  for (std::size_t q = 0; q < orders.size(); ++q) {
    for (int i = 0; i < k && i < (int)orders[q].size(); ++i) {
      if (rel[q].count(orders[q][i])) {
        hits += 1;
        break;
      }
    }
  }
  return hits / orders.size();
}

inline double ndcg_at_k(const std::vector<std::vector<int>>& orders,
                        const std::vector<std::set<int>>& rel, int k) {
  double sum = 0;
  for (std::size_t q = 0; q < orders.size(); ++q) {
    double dcg = 0, idcg = 0;
    for (int i = 0; i < k && i < (int)orders[q].size(); ++i) {
      if (rel[q].count(orders[q][i])) dcg += std::log(2.0) / std::log(i + 2.0);
    }
    for (int i = 0; i < k && i < (int)rel[q].size(); ++i) idcg += std::log(2.0) / std::log(i + 2.0);
    sum += idcg > 0 ? dcg / idcg : 0.0;
  }
  return sum / orders.size();
}

}  // namespace oracle

#endif  // Y2S_TESTS_ORACLES_HPP_
