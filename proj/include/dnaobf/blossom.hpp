#pragma once

// Maximum-weight matching on a general graph, Edmonds' blossom algorithm in
// the O(n^3) primal-dual form of Galil (1986) as laid out in Joris van
// Rantwijk's reference implementation. Integer weights only; they are doubled
// internally so every dual variable stays integral.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "dnaobf/error.hpp"

namespace dnaobf::blossom {

struct Edge {
  int u;
  int v;
  std::int64_t weight;
};

class MaxWeightMatcher {
 public:
  MaxWeightMatcher(int vertex_count, std::vector<Edge> edges, bool max_cardinality)
      : n_(vertex_count), edges_(std::move(edges)), max_cardinality_(max_cardinality) {
    for (auto& e : edges_) {
      ensure(e.u != e.v && e.u >= 0 && e.v >= 0 && e.u < n_ && e.v < n_, "invalid matching edge");
      e.weight *= 2;
    }
  }

  // mate[v] is the vertex matched to v, or -1.
  std::vector<int> solve() {
    init();
    for (int stage = 0; stage < n_; ++stage) {
      if (!run_stage()) break;
      for (int b = n_; b < 2 * n_; ++b)
        if (parent_[b] == -1 && base_[b] >= 0 && label_[b] == 1 && dual_[b] == 0)
          expand_blossom(b, true);
    }
    std::vector<int> mate(n_, -1);
    for (int v = 0; v < n_; ++v)
      if (mate_[v] >= 0) mate[v] = endpoint_[mate_[v]];
    return mate;
  }

 private:
  void init() {
    const int m = static_cast<int>(edges_.size());
    std::int64_t max_weight = 0;
    for (const auto& e : edges_) max_weight = std::max(max_weight, e.weight);
    endpoint_.resize(2 * m);
    for (int p = 0; p < 2 * m; ++p) endpoint_[p] = p % 2 == 0 ? edges_[p / 2].u : edges_[p / 2].v;
    neighbend_.assign(n_, {});
    for (int k = 0; k < m; ++k) {
      neighbend_[edges_[k].u].push_back(2 * k + 1);
      neighbend_[edges_[k].v].push_back(2 * k);
    }
    mate_.assign(n_, -1);
    label_.assign(2 * n_, 0);
    labelend_.assign(2 * n_, -1);
    inblossom_.resize(n_);
    for (int v = 0; v < n_; ++v) inblossom_[v] = v;
    parent_.assign(2 * n_, -1);
    childs_.assign(2 * n_, {});
    base_.assign(2 * n_, -1);
    for (int v = 0; v < n_; ++v) base_[v] = v;
    endps_.assign(2 * n_, {});
    bestedge_.assign(2 * n_, -1);
    blossom_bestedges_.assign(2 * n_, {});
    has_bestedges_.assign(2 * n_, false);
    unused_.clear();
    for (int b = 2 * n_ - 1; b >= n_; --b) unused_.push_back(b);
    dual_.assign(2 * n_, 0);
    for (int v = 0; v < n_; ++v) dual_[v] = max_weight;
    allowedge_.assign(m, false);
    queue_.clear();
  }

  std::int64_t slack(int k) const {
    const auto& e = edges_[k];
    return dual_[e.u] + dual_[e.v] - 2 * e.weight;
  }

  void leaves(int b, std::vector<int>& out) const {
    if (b < n_) {
      out.push_back(b);
      return;
    }
    for (int t : childs_[b]) leaves(t, out);
  }

  std::vector<int> leaves(int b) const {
    std::vector<int> out;
    leaves(b, out);
    return out;
  }

  int child_at(int b, int j) const {
    const int len = static_cast<int>(childs_[b].size());
    return childs_[b][((j % len) + len) % len];
  }

  int endp_at(int b, int j) const {
    const int len = static_cast<int>(endps_[b].size());
    return endps_[b][((j % len) + len) % len];
  }

  void assign_label(int w, int t, int p) {
    const int b = inblossom_[w];
    ensure(label_[w] == 0 && label_[b] == 0, "blossom: relabeling a labeled vertex");
    label_[w] = label_[b] = t;
    labelend_[w] = labelend_[b] = p;
    bestedge_[w] = bestedge_[b] = -1;
    if (t == 1) {
      leaves(b, queue_);
    } else if (t == 2) {
      const int base = base_[b];
      ensure(mate_[base] >= 0, "blossom: T-blossom base is unmatched");
      assign_label(endpoint_[mate_[base]], 1, mate_[base] ^ 1);
    }
  }

  // Trace back from v and w to find a new blossom base, or -1 for an
  // augmenting path.
  int scan_blossom(int v, int w) {
    std::vector<int> path;
    int base = -1;
    while (v != -1 || w != -1) {
      int b = inblossom_[v];
      if (label_[b] & 4) {
        base = base_[b];
        break;
      }
      path.push_back(b);
      label_[b] = 5;
      if (labelend_[b] == -1) {
        v = -1;
      } else {
        v = endpoint_[labelend_[b]];
        b = inblossom_[v];
        v = endpoint_[labelend_[b]];
      }
      if (w != -1) std::swap(v, w);
    }
    for (int b : path) label_[b] = 1;
    return base;
  }

  void add_blossom(int base, int k) {
    int v = edges_[k].u, w = edges_[k].v;
    const int bb = inblossom_[base];
    int bv = inblossom_[v], bw = inblossom_[w];
    const int b = unused_.back();
    unused_.pop_back();
    base_[b] = base;
    parent_[b] = -1;
    parent_[bb] = b;
    auto& path = childs_[b];
    auto& endps = endps_[b];
    path.clear();
    endps.clear();
    while (bv != bb) {
      parent_[bv] = b;
      path.push_back(bv);
      endps.push_back(labelend_[bv]);
      v = endpoint_[labelend_[bv]];
      bv = inblossom_[v];
    }
    path.push_back(bb);
    std::reverse(path.begin(), path.end());
    std::reverse(endps.begin(), endps.end());
    endps.push_back(2 * k);
    while (bw != bb) {
      parent_[bw] = b;
      path.push_back(bw);
      endps.push_back(labelend_[bw] ^ 1);
      w = endpoint_[labelend_[bw]];
      bw = inblossom_[w];
    }
    label_[b] = 1;
    labelend_[b] = labelend_[bb];
    dual_[b] = 0;
    for (int leaf : leaves(b)) {
      if (label_[inblossom_[leaf]] == 2) queue_.push_back(leaf);
      inblossom_[leaf] = b;
    }

    std::vector<int> bestedgeto(2 * n_, -1);
    for (int sub : path) {
      std::vector<int> candidates;
      if (!has_bestedges_[sub]) {
        for (int leaf : leaves(sub))
          for (int p : neighbend_[leaf]) candidates.push_back(p / 2);
      } else {
        candidates = blossom_bestedges_[sub];
      }
      for (int kk : candidates) {
        int i = edges_[kk].u, j = edges_[kk].v;
        if (inblossom_[j] == b) std::swap(i, j);
        const int bj = inblossom_[j];
        if (bj != b && label_[bj] == 1 &&
            (bestedgeto[bj] == -1 || slack(kk) < slack(bestedgeto[bj])))
          bestedgeto[bj] = kk;
      }
      blossom_bestedges_[sub].clear();
      has_bestedges_[sub] = false;
      bestedge_[sub] = -1;
    }
    auto& mine = blossom_bestedges_[b];
    mine.clear();
    for (int kk : bestedgeto)
      if (kk != -1) mine.push_back(kk);
    has_bestedges_[b] = true;
    bestedge_[b] = -1;
    for (int kk : mine)
      if (bestedge_[b] == -1 || slack(kk) < slack(bestedge_[b])) bestedge_[b] = kk;
  }

  void expand_blossom(int b, bool endstage) {
    const std::vector<int> children = childs_[b];
    for (int s : children) {
      parent_[s] = -1;
      if (s < n_) {
        inblossom_[s] = s;
      } else if (endstage && dual_[s] == 0) {
        expand_blossom(s, endstage);
      } else {
        for (int leaf : leaves(s)) inblossom_[leaf] = s;
      }
    }

    if (!endstage && label_[b] == 2) {
      const int entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
      const int len = static_cast<int>(childs_[b].size());
      int j = static_cast<int>(std::find(childs_[b].begin(), childs_[b].end(), entrychild) -
                               childs_[b].begin());
      int jstep, endptrick;
      if (j & 1) {
        j -= len;
        jstep = 1;
        endptrick = 0;
      } else {
        jstep = -1;
        endptrick = 1;
      }
      int p = labelend_[b];
      while (j != 0) {
        label_[endpoint_[p ^ 1]] = 0;
        label_[endpoint_[endp_at(b, j - endptrick) ^ endptrick ^ 1]] = 0;
        assign_label(endpoint_[p ^ 1], 2, p);
        allowedge_[endp_at(b, j - endptrick) / 2] = true;
        j += jstep;
        p = endp_at(b, j - endptrick) ^ endptrick;
        allowedge_[p / 2] = true;
        j += jstep;
      }
      const int bv = child_at(b, j);
      label_[endpoint_[p ^ 1]] = label_[bv] = 2;
      labelend_[endpoint_[p ^ 1]] = labelend_[bv] = p;
      bestedge_[bv] = -1;
      j += jstep;
      while (child_at(b, j) != entrychild) {
        const int sub = child_at(b, j);
        if (label_[sub] == 1) {
          j += jstep;
          continue;
        }
        int reached = -1;
        for (int leaf : leaves(sub))
          if (label_[leaf] != 0) {
            reached = leaf;
            break;
          }
        if (reached != -1) {
          ensure(label_[reached] == 2 && inblossom_[reached] == sub, "blossom: bad expand label");
          label_[reached] = 0;
          label_[endpoint_[mate_[base_[sub]]]] = 0;
          assign_label(reached, 2, labelend_[reached]);
        }
        j += jstep;
      }
    }

    label_[b] = labelend_[b] = -1;
    childs_[b].clear();
    endps_[b].clear();
    base_[b] = -1;
    blossom_bestedges_[b].clear();
    has_bestedges_[b] = false;
    bestedge_[b] = -1;
    unused_.push_back(b);
  }

  // Swap matched/unmatched edges along the even path from v to the base of b.
  void augment_blossom(int b, int v) {
    int t = v;
    while (parent_[t] != b) t = parent_[t];
    if (t >= n_) augment_blossom(t, v);
    const int len = static_cast<int>(childs_[b].size());
    const int i = static_cast<int>(std::find(childs_[b].begin(), childs_[b].end(), t) -
                                   childs_[b].begin());
    int j = i;
    int jstep, endptrick;
    if (i & 1) {
      j -= len;
      jstep = 1;
      endptrick = 0;
    } else {
      jstep = -1;
      endptrick = 1;
    }
    while (j != 0) {
      j += jstep;
      t = child_at(b, j);
      const int p = endp_at(b, j - endptrick) ^ endptrick;
      if (t >= n_) augment_blossom(t, endpoint_[p]);
      j += jstep;
      t = child_at(b, j);
      if (t >= n_) augment_blossom(t, endpoint_[p ^ 1]);
      mate_[endpoint_[p]] = p ^ 1;
      mate_[endpoint_[p ^ 1]] = p;
    }
    std::rotate(childs_[b].begin(), childs_[b].begin() + i, childs_[b].end());
    std::rotate(endps_[b].begin(), endps_[b].begin() + i, endps_[b].end());
    base_[b] = base_[childs_[b][0]];
    ensure(base_[b] == v, "blossom: augment left the wrong base");
  }

  void augment_matching(int k) {
    const int v = edges_[k].u, w = edges_[k].v;
    for (auto [s, p] : {std::pair{v, 2 * k + 1}, std::pair{w, 2 * k}}) {
      while (true) {
        const int bs = inblossom_[s];
        ensure(label_[bs] == 1, "blossom: augmenting from a non-S blossom");
        if (bs >= n_) augment_blossom(bs, s);
        mate_[s] = p;
        if (labelend_[bs] == -1) break;
        const int t = endpoint_[labelend_[bs]];
        const int bt = inblossom_[t];
        ensure(label_[bt] == 2, "blossom: expected a T blossom");
        s = endpoint_[labelend_[bt]];
        const int j = endpoint_[labelend_[bt] ^ 1];
        if (bt >= n_) augment_blossom(bt, j);
        mate_[j] = labelend_[bt];
        p = labelend_[bt] ^ 1;
      }
    }
  }

  // One stage: grow alternating trees until an augmentation happens or the
  // duals prove none exists. Returns whether the matching grew.
  bool run_stage() {
    std::fill(label_.begin(), label_.end(), 0);
    std::fill(bestedge_.begin(), bestedge_.end(), -1);
    for (int b = n_; b < 2 * n_; ++b) {
      blossom_bestedges_[b].clear();
      has_bestedges_[b] = false;
    }
    std::fill(allowedge_.begin(), allowedge_.end(), false);
    queue_.clear();
    for (int v = 0; v < n_; ++v)
      if (mate_[v] == -1 && label_[inblossom_[v]] == 0) assign_label(v, 1, -1);

    while (true) {
      while (!queue_.empty()) {
        const int v = queue_.back();
        queue_.pop_back();
        for (int p : neighbend_[v]) {
          const int k = p / 2;
          const int w = endpoint_[p];
          if (inblossom_[v] == inblossom_[w]) continue;
          std::int64_t kslack = 0;
          if (!allowedge_[k]) {
            kslack = slack(k);
            if (kslack <= 0) allowedge_[k] = true;
          }
          if (allowedge_[k]) {
            if (label_[inblossom_[w]] == 0) {
              assign_label(w, 2, p ^ 1);
            } else if (label_[inblossom_[w]] == 1) {
              const int base = scan_blossom(v, w);
              if (base >= 0) {
                add_blossom(base, k);
              } else {
                augment_matching(k);
                return true;
              }
            } else if (label_[w] == 0) {
              label_[w] = 2;
              labelend_[w] = p ^ 1;
            }
          } else if (label_[inblossom_[w]] == 1) {
            const int b = inblossom_[v];
            if (bestedge_[b] == -1 || kslack < slack(bestedge_[b])) bestedge_[b] = k;
          } else if (label_[w] == 0) {
            if (bestedge_[w] == -1 || kslack < slack(bestedge_[w])) bestedge_[w] = k;
          }
        }
      }

      int deltatype = -1;
      std::int64_t delta = 0;
      int deltaedge = -1, deltablossom = -1;
      if (!max_cardinality_) {
        deltatype = 1;
        delta = *std::min_element(dual_.begin(), dual_.begin() + n_);
      }
      for (int v = 0; v < n_; ++v) {
        if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
          const std::int64_t d = slack(bestedge_[v]);
          if (deltatype == -1 || d < delta) delta = d, deltatype = 2, deltaedge = bestedge_[v];
        }
      }
      for (int b = 0; b < 2 * n_; ++b) {
        if (parent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
          const std::int64_t d = slack(bestedge_[b]) / 2;
          if (deltatype == -1 || d < delta) delta = d, deltatype = 3, deltaedge = bestedge_[b];
        }
      }
      for (int b = n_; b < 2 * n_; ++b) {
        if (base_[b] >= 0 && parent_[b] == -1 && label_[b] == 2 &&
            (deltatype == -1 || dual_[b] < delta))
          delta = dual_[b], deltatype = 4, deltablossom = b;
      }
      if (deltatype == -1) {
        deltatype = 1;
        delta = std::max<std::int64_t>(0, *std::min_element(dual_.begin(), dual_.begin() + n_));
      }

      for (int v = 0; v < n_; ++v) {
        if (label_[inblossom_[v]] == 1) dual_[v] -= delta;
        else if (label_[inblossom_[v]] == 2) dual_[v] += delta;
      }
      for (int b = n_; b < 2 * n_; ++b) {
        if (base_[b] >= 0 && parent_[b] == -1) {
          if (label_[b] == 1) dual_[b] += delta;
          else if (label_[b] == 2) dual_[b] -= delta;
        }
      }

      if (deltatype == 1) return false;
      if (deltatype == 2) {
        allowedge_[deltaedge] = true;
        int i = edges_[deltaedge].u, j = edges_[deltaedge].v;
        if (label_[inblossom_[i]] == 0) std::swap(i, j);
        queue_.push_back(i);
      } else if (deltatype == 3) {
        allowedge_[deltaedge] = true;
        queue_.push_back(edges_[deltaedge].u);
      } else {
        expand_blossom(deltablossom, false);
      }
    }
  }

  int n_;
  std::vector<Edge> edges_;
  bool max_cardinality_;

  std::vector<int> endpoint_;
  std::vector<std::vector<int>> neighbend_;
  std::vector<int> mate_;  // endpoint index, not vertex
  std::vector<int> label_;
  std::vector<int> labelend_;
  std::vector<int> inblossom_;
  std::vector<int> parent_;
  std::vector<std::vector<int>> childs_;
  std::vector<int> base_;
  std::vector<std::vector<int>> endps_;
  std::vector<int> bestedge_;
  std::vector<std::vector<int>> blossom_bestedges_;
  std::vector<bool> has_bestedges_;
  std::vector<int> unused_;
  std::vector<std::int64_t> dual_;
  std::vector<bool> allowedge_;
  std::vector<int> queue_;
};

inline std::vector<int> max_weight_matching(int vertex_count, std::vector<Edge> edges,
                                            bool max_cardinality) {
  return MaxWeightMatcher(vertex_count, std::move(edges), max_cardinality).solve();
}

}  // namespace dnaobf::blossom
