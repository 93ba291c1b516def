#pragma once

// Bit-packed graphs, exact maximum clique (branch and bound with a greedy
// coloring bound), and maximal clique enumeration (Bron-Kerbosch with pivot).

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <numeric>
#include <optional>
#include <span>
#include <thread>
#include <vector>

#include "paleyvec/error.hpp"

namespace paleyvec {

namespace bits {

using Word = std::uint64_t;

inline std::size_t words_for(std::size_t n) { return (n + 63) / 64; }
inline void set(std::span<Word> s, std::size_t i) { s[i >> 6] |= Word{1} << (i & 63); }
inline void reset(std::span<Word> s, std::size_t i) { s[i >> 6] &= ~(Word{1} << (i & 63)); }
inline bool test(std::span<const Word> s, std::size_t i) { return (s[i >> 6] >> (i & 63)) & 1u; }

inline std::size_t count(std::span<const Word> s) {
  std::size_t c = 0;
  for (auto w : s) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

inline bool none(std::span<const Word> s) {
  for (auto w : s)
    if (w) return false;
  return true;
}

/// Calls fn(i) for each set bit, ascending.
template <class Fn>
void for_each(std::span<const Word> s, Fn&& fn) {
  for (std::size_t k = 0; k < s.size(); ++k)
    for (Word w = s[k]; w; w &= w - 1) fn(k * 64 + static_cast<std::size_t>(std::countr_zero(w)));
}

}  // namespace bits

/// Undirected simple graph with one bit row per vertex.
class BitGraph {
 public:
  BitGraph() = default;
  explicit BitGraph(std::size_t n) : n_(n), words_(bits::words_for(n)), adj_(n * words_, 0) {}

  std::size_t size() const noexcept { return n_; }
  std::size_t words() const noexcept { return words_; }

  void add_edge(std::size_t u, std::size_t v) {
    if (u == v) return;
    bits::set(row_mut(u), v);
    bits::set(row_mut(v), u);
  }
  /// One direction only; callers building symmetric relations row by row use this.
  void set_arc(std::size_t u, std::size_t v) {
    if (u != v) bits::set(row_mut(u), v);
  }

  bool has_edge(std::size_t u, std::size_t v) const { return bits::test(row(u), v); }
  std::span<const bits::Word> row(std::size_t v) const { return {adj_.data() + v * words_, words_}; }
  std::size_t degree(std::size_t v) const { return bits::count(row(v)); }

  bool is_symmetric() const {
    for (std::size_t u = 0; u < n_; ++u) {
      bool ok = true;
      bits::for_each(row(u), [&](std::size_t v) { ok = ok && has_edge(v, u); });
      if (!ok || has_edge(u, u)) return false;
    }
    return true;
  }

  bool is_clique(std::span<const std::uint32_t> vs) const {
    for (std::size_t i = 0; i < vs.size(); ++i)
      for (std::size_t j = i + 1; j < vs.size(); ++j)
        if (vs[i] == vs[j] || !has_edge(vs[i], vs[j])) return false;
    return true;
  }

  /// A clique is maximal when no outside vertex is adjacent to all members.
  bool is_maximal_clique(std::span<const std::uint32_t> vs) const {
    if (!is_clique(vs)) return false;
    std::vector<bits::Word> common(words_, ~bits::Word{0});
    if (n_ % 64) common.back() = (bits::Word{1} << (n_ % 64)) - 1;
    for (auto v : vs) {
      const auto r = row(v);
      for (std::size_t k = 0; k < words_; ++k) common[k] &= r[k];
    }
    return bits::none(common);
  }

 private:
  std::span<bits::Word> row_mut(std::size_t v) { return {adj_.data() + v * words_, words_}; }

  std::size_t n_ = 0, words_ = 0;
  std::vector<bits::Word> adj_;
};

/// Pruning rule derived from the maximal-clique structure of G_U: in any
/// maximal clique, the vertices a with a^2 in U form an F_q-space of size
/// q^t, the remaining r vertices satisfy r <= d_U + 1 when t = 0 and
/// r + t <= d_U when t >= 1. A partial clique with r0 "outer" vertices and
/// at least one nonzero "inner" vertex therefore extends to at most
/// q^(d_U - r0) + r0 vertices.
struct StructureRule {
  std::vector<std::uint8_t> inner;  // per vertex: a^2 in U
  std::uint64_t q = 2;
  std::uint32_t dim = 1;

  /// Upper bound on any clique extending a clique with the given counts.
  /// `inner_nonzero` excludes the vertex 0.
  std::uint64_t bound(std::uint32_t outer, std::uint32_t inner_nonzero) const {
    const std::uint64_t t_free = dim + 2;
    std::uint64_t with_inner = 0;
    if (outer < dim) {
      std::uint64_t p = 1;
      for (std::uint32_t i = 0; i < dim - outer && p < (std::uint64_t{1} << 40); ++i) p *= q;
      with_inner = p + outer;
    }
    if (inner_nonzero > 0) return with_inner;
    return std::max(t_free, with_inner);
  }
};

struct CliqueOptions {
  unsigned workers = 1;
  /// A proven lower bound on the clique number; the search only looks for
  /// cliques of at least this size.
  std::size_t lower_bound = 0;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  const StructureRule* rule = nullptr;
  /// Replace the witness by the lexicographically least maximum clique.
  bool canonical_witness = true;
};

struct CliqueResult {
  std::size_t size = 0;
  std::vector<std::uint32_t> witness;  // ascending vertex indices
  std::uint64_t nodes = 0;
};

namespace detail {

/// Branch-and-bound search over a relabelled copy of the graph in which
/// position 0 is the highest-degree vertex.
class MaxCliqueSearch {
 public:
  MaxCliqueSearch(const BitGraph& g, const CliqueOptions& opt) : g_(g), opt_(opt), n_(g.size()), w_(g.words()) {
    order_.resize(n_);
    std::iota(order_.begin(), order_.end(), 0u);
    std::vector<std::size_t> deg(n_);
    for (std::size_t v = 0; v < n_; ++v) deg[v] = g.degree(v);
    std::stable_sort(order_.begin(), order_.end(), [&](auto a, auto b) { return deg[a] > deg[b]; });
    pos_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) pos_[order_[i]] = static_cast<std::uint32_t>(i);
    adj_.assign(n_ * w_, 0);
    for (std::size_t i = 0; i < n_; ++i)
      bits::for_each(g.row(order_[i]), [&](std::size_t v) { bits::set(row_mut(i), pos_[v]); });
    if (opt.rule) {
      inner_.resize(n_);
      for (std::size_t i = 0; i < n_; ++i) inner_[i] = opt.rule->inner[order_[i]];
    }
  }

  CliqueResult run() {
    CliqueResult res;
    if (n_ == 0) return res;
    // Universal vertices belong to every maximal clique.
    std::vector<bits::Word> P(w_, 0);
    std::vector<std::uint32_t> forced;
    for (std::size_t i = 0; i < n_; ++i) {
      if (bits::count(row(i)) + 1 == n_) forced.push_back(static_cast<std::uint32_t>(i));
      else bits::set(P, i);
    }
    best_.store(opt_.lower_bound > 0 ? opt_.lower_bound - 1 : 0);
    if (forced.size() > best_.load()) {
      best_.store(forced.size());
      best_clique_ = forced;
    }
    if (!bits::none(P)) search_root(forced, P);
    if (error_) std::rethrow_exception(error_);
    res.size = best_clique_.size();
    for (auto i : best_clique_) res.witness.push_back(static_cast<std::uint32_t>(order_[i]));
    std::sort(res.witness.begin(), res.witness.end());
    res.nodes = nodes_.load();
    return res;
  }

 private:
  struct Frame {
    std::vector<bits::Word> cand;
    std::vector<std::uint32_t> order, color;
  };

  struct Worker {
    std::vector<std::uint32_t> clique;
    std::uint32_t outer = 0, inner_nonzero = 0;
    std::vector<Frame> frames;
    std::uint64_t nodes = 0;
  };

  std::span<const bits::Word> row(std::size_t i) const { return {adj_.data() + i * w_, w_}; }
  std::span<bits::Word> row_mut(std::size_t i) { return {adj_.data() + i * w_, w_}; }

  /// Greedy sequential coloring of `P`; fills vertices in color order with
  /// non-decreasing color numbers.
  void color_sort(std::span<const bits::Word> P, std::vector<std::uint32_t>& order,
                  std::vector<std::uint32_t>& color) const {
    order.clear();
    color.clear();
    std::vector<bits::Word> U(P.begin(), P.end()), Q(w_);
    std::uint32_t k = 0;
    while (!bits::none(U)) {
      ++k;
      std::copy(U.begin(), U.end(), Q.begin());
      for (std::size_t wi = 0; wi < w_; ++wi) {
        while (Q[wi]) {
          const std::size_t v = wi * 64 + static_cast<std::size_t>(std::countr_zero(Q[wi]));
          bits::reset(U, v);
          bits::reset(Q, v);
          const auto r = row(v);
          for (std::size_t j = wi; j < w_; ++j) Q[j] &= ~r[j];
          order.push_back(static_cast<std::uint32_t>(v));
          color.push_back(k);
        }
      }
    }
  }

  bool rule_allows(const Worker& wk, std::size_t v) const {
    if (!opt_.rule) return true;
    std::uint32_t outer = wk.outer, inner = wk.inner_nonzero;
    if (inner_[v]) {
      if (order_[v] != 0) ++inner;
    } else {
      ++outer;
    }
    return opt_.rule->bound(outer, inner) > best_.load(std::memory_order_relaxed);
  }

  void push(Worker& wk, std::size_t v) const {
    wk.clique.push_back(static_cast<std::uint32_t>(v));
    if (opt_.rule) {
      if (!inner_[v]) ++wk.outer;
      else if (order_[v] != 0) ++wk.inner_nonzero;
    }
  }

  void pop(Worker& wk) const {
    const std::size_t v = wk.clique.back();
    wk.clique.pop_back();
    if (opt_.rule) {
      if (!inner_[v]) --wk.outer;
      else if (order_[v] != 0) --wk.inner_nonzero;
    }
  }

  void offer(const Worker& wk) {
    std::size_t cur = best_.load();
    while (wk.clique.size() > cur) {
      if (best_.compare_exchange_weak(cur, wk.clique.size())) {
        std::lock_guard lock(mu_);
        if (wk.clique.size() > best_clique_.size()) best_clique_ = wk.clique;
        return;
      }
    }
  }

  void tick(Worker& wk) {
    if ((++wk.nodes & 0x3ff) == 0) {
      nodes_.fetch_add(0x400, std::memory_order_relaxed);
      if (stop_.load(std::memory_order_relaxed)) throw Error(Errc::TimeLimit, "search stopped");
      if (opt_.deadline && std::chrono::steady_clock::now() > *opt_.deadline)
        throw Error(Errc::TimeLimit, "clique search exceeded its time limit");
    }
  }

  void expand(Worker& wk, std::size_t depth) {
    tick(wk);
    Frame& fr = wk.frames[depth];
    color_sort(fr.cand, fr.order, fr.color);
    for (std::size_t i = fr.order.size(); i-- > 0;) {
      if (wk.clique.size() + fr.color[i] <= best_.load(std::memory_order_relaxed)) return;
      const std::size_t v = fr.order[i];
      if (rule_allows(wk, v)) {
        push(wk, v);
        Frame& next = wk.frames[depth + 1];
        next.cand.resize(w_);
        const auto r = row(v);
        bool empty = true;
        for (std::size_t k = 0; k < w_; ++k) {
          next.cand[k] = fr.cand[k] & r[k];
          empty = empty && next.cand[k] == 0;
        }
        if (empty) offer(wk);
        else expand(wk, depth + 1);
        pop(wk);
      }
      bits::reset(fr.cand, v);
    }
  }

  void search_root(const std::vector<std::uint32_t>& forced, const std::vector<bits::Word>& P) {
    std::vector<std::uint32_t> order, color;
    color_sort(P, order, color);
    std::atomic<std::size_t> next{order.size()};

    auto work = [&](Worker& wk) {
      try {
        for (auto v : forced) push(wk, v);
        // depth never exceeds the number of vertices; sized once so frame
        // references stay valid during recursion
        wk.frames.resize(n_ + 2);
        for (;;) {
          const std::size_t i = next.fetch_sub(1);
          if (i == 0 || i > order.size()) break;
          const std::size_t k = i - 1;
          if (forced.size() + color[k] <= best_.load()) continue;
          const std::size_t v = order[k];
          if (!rule_allows(wk, v)) continue;
          // candidates: earlier positions in the color order adjacent to v
          Frame& fr = wk.frames[0];
          fr.cand.assign(w_, 0);
          for (std::size_t j = 0; j < k; ++j) bits::set(fr.cand, order[j]);
          const auto r = row(v);
          bool empty = true;
          for (std::size_t w = 0; w < w_; ++w) {
            fr.cand[w] &= r[w];
            empty = empty && fr.cand[w] == 0;
          }
          push(wk, v);
          if (empty) offer(wk);
          else expand(wk, 0);
          pop(wk);
        }
      } catch (...) {
        std::lock_guard lock(mu_);
        if (!error_) error_ = std::current_exception();
        stop_.store(true);
      }
      nodes_.fetch_add(wk.nodes & 0x3ff, std::memory_order_relaxed);
    };

    const unsigned workers = std::max(1u, opt_.workers);
    if (workers == 1) {
      Worker wk;
      work(wk);
      return;
    }
    std::vector<Worker> wks(workers);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back([&, t] { work(wks[t]); });
    for (auto& th : pool) th.join();
  }

  const BitGraph& g_;
  const CliqueOptions& opt_;
  std::size_t n_, w_;
  std::vector<std::uint32_t> order_, pos_;
  std::vector<bits::Word> adj_;
  std::vector<std::uint8_t> inner_;
  std::atomic<std::size_t> best_{0};
  std::atomic<std::uint64_t> nodes_{0};
  std::atomic<bool> stop_{false};
  std::mutex mu_;
  std::vector<std::uint32_t> best_clique_;
  std::exception_ptr error_;
};

inline std::size_t greedy_color_count(const BitGraph& g, std::span<const bits::Word> P) {
  std::vector<bits::Word> U(P.begin(), P.end()), Q(P.size());
  std::size_t k = 0;
  while (!bits::none(U)) {
    ++k;
    std::copy(U.begin(), U.end(), Q.begin());
    for (std::size_t wi = 0; wi < Q.size(); ++wi) {
      while (Q[wi]) {
        const std::size_t v = wi * 64 + static_cast<std::size_t>(std::countr_zero(Q[wi]));
        bits::reset(U, v);
        bits::reset(Q, v);
        const auto r = g.row(v);
        for (std::size_t j = wi; j < Q.size(); ++j) Q[j] &= ~r[j];
      }
    }
  }
  return k;
}

}  // namespace detail

/// Lexicographically least clique (as an ascending index sequence) of the
/// given size, or empty when none exists.
inline std::vector<std::uint32_t> lex_least_clique(const BitGraph& g, std::size_t size) {
  std::vector<std::uint32_t> cur;
  if (size == 0) return cur;
  const std::size_t w = g.words();
  std::vector<std::vector<bits::Word>> frames(size + 1, std::vector<bits::Word>(w, 0));
  for (std::size_t v = 0; v < g.size(); ++v) bits::set(frames[0], v);
  std::function<bool(std::size_t)> dfs = [&](std::size_t depth) -> bool {
    if (cur.size() == size) return true;
    auto& P = frames[depth];
    if (cur.size() + bits::count(P) < size) return false;
    if (cur.size() + detail::greedy_color_count(g, P) < size) return false;
    for (std::size_t wi = 0; wi < w; ++wi) {
      while (P[wi]) {
        const std::size_t v = wi * 64 + static_cast<std::size_t>(std::countr_zero(P[wi]));
        bits::reset(P, v);
        auto& next = frames[depth + 1];
        const auto r = g.row(v);
        for (std::size_t k = 0; k < w; ++k) next[k] = P[k] & r[k];
        cur.push_back(static_cast<std::uint32_t>(v));
        if (dfs(depth + 1)) return true;
        cur.pop_back();
        if (cur.size() + bits::count(P) < size) return false;
      }
    }
    return false;
  };
  if (!dfs(0)) cur.clear();
  return cur;
}

/// Exact clique number with a witness.
inline CliqueResult max_clique(const BitGraph& g, const CliqueOptions& opt = {}) {
  CliqueResult r = detail::MaxCliqueSearch(g, opt).run();
  if (r.size < opt.lower_bound) {
    // The claimed lower bound was not met; search again without it so the
    // caller sees the true value.
    CliqueOptions relaxed = opt;
    relaxed.lower_bound = 0;
    r = detail::MaxCliqueSearch(g, relaxed).run();
  }
  if (opt.canonical_witness && r.size > 0) r.witness = lex_least_clique(g, r.size);
  return r;
}

/// Default cap on the number of maximal cliques enumerated.
inline constexpr std::uint64_t kDefaultCliqueCap = 1'000'000;

/// Bron-Kerbosch with Tomita pivoting. Each inclusion-maximal clique is passed
/// to `fn` once as an ascending index list. Throws CapExceeded past `cap`.
inline std::uint64_t for_each_maximal_clique(const BitGraph& g,
                                              const std::function<void(const std::vector<std::uint32_t>&)>& fn,
                                              std::uint64_t cap = kDefaultCliqueCap) {
  const std::size_t w = g.words();
  std::uint64_t found = 0;
  std::vector<std::uint32_t> R;
  std::function<void(std::vector<bits::Word>&, std::vector<bits::Word>&)> bk = [&](std::vector<bits::Word>& P,
                                                                                    std::vector<bits::Word>& X) {
    if (bits::none(P)) {
      if (bits::none(X)) {
        if (++found > cap) throw Error(Errc::CapExceeded, "more than " + std::to_string(cap) + " maximal cliques");
        std::vector<std::uint32_t> c = R;
        std::sort(c.begin(), c.end());
        fn(c);
      }
      return;
    }
    std::size_t pivot = 0, best = 0;
    bool have = false;
    auto consider = [&](std::size_t u) {
      std::size_t c = 0;
      const auto r = g.row(u);
      for (std::size_t k = 0; k < w; ++k) c += static_cast<std::size_t>(std::popcount(P[k] & r[k]));
      if (!have || c > best) {
        best = c;
        pivot = u;
        have = true;
      }
    };
    bits::for_each(P, consider);
    bits::for_each(X, consider);
    std::vector<bits::Word> ext(w);
    const auto pr = g.row(pivot);
    for (std::size_t k = 0; k < w; ++k) ext[k] = P[k] & ~pr[k];
    bits::for_each(ext, [&](std::size_t v) {
      const auto r = g.row(v);
      std::vector<bits::Word> P2(w), X2(w);
      for (std::size_t k = 0; k < w; ++k) {
        P2[k] = P[k] & r[k];
        X2[k] = X[k] & r[k];
      }
      R.push_back(static_cast<std::uint32_t>(v));
      bk(P2, X2);
      R.pop_back();
      bits::reset(P, v);
      bits::set(X, v);
    });
  };
  std::vector<bits::Word> P(w, 0), X(w, 0);
  for (std::size_t v = 0; v < g.size(); ++v) bits::set(P, v);
  bk(P, X);
  return found;
}

inline std::vector<std::vector<std::uint32_t>> enumerate_maximal_cliques(const BitGraph& g,
                                                                         std::uint64_t cap = kDefaultCliqueCap) {
  std::vector<std::vector<std::uint32_t>> out;
  for_each_maximal_clique(g, [&](const auto& c) { out.push_back(c); }, cap);
  return out;
}

}  // namespace paleyvec
