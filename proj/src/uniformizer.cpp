#include "qa/uniformizer.hpp"

#include <algorithm>
#include <limits>
#include <queue>

#include "qa/errors.hpp"

namespace qa {

  Uniformizer::Uniformizer(Transducer const& t)
      : source_(nivat_normalize(t)), growth_(std::max<std::size_t>(1, source_.num_states())) {}

  Uniformizer uniformize(Transducer const& t) {
    return Uniformizer(t);
  }

  // Nodes are (i, q): i letters of u read, machine in state q. Reading a
  // letter of u costs nothing, writing an output letter costs one. h is the
  // least remaining output length; the output is then built letter by
  // letter along tight edges, always taking the smallest letter.
  Word Uniformizer::select(std::span<Symbol const> u) const {
    std::size_t const q     = source_.num_states();
    std::size_t const n     = u.size();
    std::size_t const inf   = std::numeric_limits<std::size_t>::max();
    auto              node  = [q](std::size_t i, State s) { return i * q + static_cast<std::size_t>(s); };

    std::vector<std::vector<std::pair<Symbol, State>>> in_moves(q), out_moves(q);
    std::vector<std::vector<State>>                    out_back(q);
    for (auto const& tr : source_.transitions()) {
      if (tr.out == kEpsilon) {
        in_moves[static_cast<std::size_t>(tr.from)].emplace_back(tr.in, tr.to);
      } else {
        out_moves[static_cast<std::size_t>(tr.from)].emplace_back(tr.out, tr.to);
        out_back[static_cast<std::size_t>(tr.to)].push_back(tr.from);
      }
    }

    std::vector<std::size_t> h((n + 1) * q, inf);
    using Item = std::pair<std::size_t, State>;
    for (std::size_t i = n + 1; i-- > 0;) {
      std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
      for (std::size_t s = 0; s < q; ++s) {
        std::size_t best = inf;
        if (i == n) {
          if (source_.is_final(static_cast<State>(s))) {
            best = 0;
          }
        } else {
          for (auto const& [a, r] : in_moves[s]) {
            if (a == u[i]) {
              best = std::min(best, h[node(i + 1, r)]);
            }
          }
        }
        h[node(i, static_cast<State>(s))] = best;
        if (best != inf) {
          heap.emplace(best, static_cast<State>(s));
        }
      }
      while (!heap.empty()) {
        auto [d, s] = heap.top();
        heap.pop();
        if (d != h[node(i, s)]) {
          continue;
        }
        for (State p : out_back[static_cast<std::size_t>(s)]) {
          if (d + 1 < h[node(i, p)]) {
            h[node(i, p)] = d + 1;
            heap.emplace(d + 1, p);
          }
        }
      }
    }

    std::size_t remaining = inf;
    for (State s : source_.initial()) {
      remaining = std::min(remaining, h[node(0, s)]);
    }
    if (remaining == inf) {
      throw PreconditionError("select: word is not in the domain");
    }

    std::vector<std::uint8_t> mark((n + 1) * q, 0);
    std::vector<std::size_t>  frontier;
    for (State s : source_.initial()) {
      if (h[node(0, s)] == remaining) {
        frontier.push_back(node(0, s));
      }
    }
    Word out;
    out.reserve(remaining);
    while (remaining > 0) {
      // Close under free input moves that stay tight.
      std::fill(mark.begin(), mark.end(), 0);
      std::vector<std::size_t> closed;
      for (auto v : frontier) {
        if (mark[v] == 0) {
          mark[v] = 1;
          closed.push_back(v);
        }
      }
      for (std::size_t k = 0; k < closed.size(); ++k) {
        std::size_t i = closed[k] / q;
        std::size_t s = closed[k] % q;
        if (i == n) {
          continue;
        }
        for (auto const& [a, r] : in_moves[s]) {
          auto w = node(i + 1, r);
          if (a == u[i] && h[w] == remaining && mark[w] == 0) {
            mark[w] = 1;
            closed.push_back(w);
          }
        }
      }
      Symbol best = std::numeric_limits<Symbol>::max();
      for (auto v : closed) {
        std::size_t i = v / q;
        for (auto const& [b, r] : out_moves[v % q]) {
          if (b < best && h[node(i, r)] == remaining - 1) {
            best = b;
          }
        }
      }
      frontier.clear();
      for (auto v : closed) {
        std::size_t i = v / q;
        for (auto const& [b, r] : out_moves[v % q]) {
          if (b == best && h[node(i, r)] == remaining - 1) {
            frontier.push_back(node(i, r));
          }
        }
      }
      out.push_back(best);
      --remaining;
    }
    return out;
  }

}  // namespace qa
