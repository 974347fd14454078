#include "qa/oracle.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "qa/errors.hpp"
#include "text_format.hpp"

namespace qa {

  char const* to_string(OracleKind k) {
    switch (k) {
      case OracleKind::semigroup:
        return "semigroup";
      case OracleKind::monoid:
        return "monoid";
      case OracleKind::group:
        return "group";
    }
    return "?";
  }

  std::optional<Element> SemigroupOracle::inverse(Element const&) const {
    return std::nullopt;
  }

  std::vector<Element> SemigroupOracle::neighbors(Element const& x) const {
    if (kind() != OracleKind::group) {
      throw PreconditionError("oracle " + name() + " has no neighbor function");
    }
    std::vector<Element> out;
    for (Symbol a = 0; a < static_cast<Symbol>(alphabet().size()); ++a) {
      auto g = generator(a);
      out.push_back(multiply(x, g));
      out.push_back(multiply(x, *inverse(g)));
    }
    return out;
  }

  Element SemigroupOracle::eval(std::span<Symbol const> w) const {
    Element acc = identity();
    for (Symbol a : w) {
      acc = multiply(acc, generator(a));
    }
    return acc;
  }

  std::string SemigroupOracle::describe(Element const& x) const {
    std::ostringstream out;
    out << '[';
    for (std::size_t i = 0; i < x.size(); ++i) {
      out << (i ? "," : "") << x[i];
    }
    out << ']';
    return out.str();
  }

  namespace {

    void check_letter(Alphabet const& a, Symbol s) {
      if (s < 0 || static_cast<std::size_t>(s) >= a.size()) {
        throw AlphabetMismatch("letter " + std::to_string(s) + " out of range");
      }
    }

    ////////////////////////////////////////////////////////////////////
    // Finite tables
    ////////////////////////////////////////////////////////////////////

    class TableOracle final : public SemigroupOracle {
     public:
      TableOracle(MultiplicationTable table, Alphabet alphabet, std::vector<std::int64_t> gens)
          : SemigroupOracle(std::move(alphabet)), table_(std::move(table)), gens_(std::move(gens)) {
        auto const n = table_.elements;
        for (std::size_t e = 0; e < n && !identity_; ++e) {
          bool ok = true;
          for (std::size_t x = 0; x < n && ok; ++x) {
            ok = table_.rows[e][x] == x && table_.rows[x][e] == x;
          }
          if (ok) {
            identity_ = static_cast<std::int64_t>(e);
          }
        }
        // closure of the generators under right multiplication
        std::vector<std::uint8_t> seen(n, 0);
        std::vector<std::size_t>  queue;
        for (auto g : gens_) {
          if (seen[static_cast<std::size_t>(g)] == 0) {
            seen[static_cast<std::size_t>(g)] = 1;
            queue.push_back(static_cast<std::size_t>(g));
          }
        }
        for (std::size_t i = 0; i < queue.size(); ++i) {
          for (auto g : gens_) {
            auto y = table_.rows[queue[i]][static_cast<std::size_t>(g)];
            if (seen[y] == 0) {
              seen[y] = 1;
              queue.push_back(y);
            }
          }
        }
        generated_ = queue.size();
        kind_      = OracleKind::semigroup;
        if (identity_ && seen[static_cast<std::size_t>(*identity_)] != 0) {
          kind_      = OracleKind::monoid;
          bool group = true;
          for (auto x : queue) {
            bool has = false;
            for (auto y : queue) {
              has = has || table_.rows[x][y] == static_cast<std::size_t>(*identity_);
            }
            group = group && has;
          }
          if (group) {
            kind_ = OracleKind::group;
          }
        }
        // predecessors: (y, letter) with y·letter = x; y = -1 is the
        // adjoined identity
        preds_.resize(n);
        for (std::size_t y = 0; y < n; ++y) {
          for (auto g : gens_) {
            preds_[table_.rows[y][static_cast<std::size_t>(g)]].push_back(static_cast<std::int64_t>(y));
          }
        }
        if (!identity_) {
          for (auto g : gens_) {
            preds_[static_cast<std::size_t>(g)].push_back(-1);
          }
        }
      }

      std::string name() const override {
        return "table";
      }
      OracleKind kind() const override {
        return kind_;
      }
      Element generator(Symbol a) const override {
        check_letter(alphabet(), a);
        return {gens_[static_cast<std::size_t>(a)]};
      }
      Element identity() const override {
        return {identity_.value_or(-1)};
      }
      Element multiply(Element const& x, Element const& y) const override {
        if (x[0] < 0) {
          return y;
        }
        if (y[0] < 0) {
          return x;
        }
        return {static_cast<std::int64_t>(
            table_.rows[static_cast<std::size_t>(x[0])][static_cast<std::size_t>(y[0])])};
      }
      std::optional<std::size_t> size() const override {
        return generated_;
      }
      std::optional<Element> inverse(Element const& x) const override {
        if (kind_ != OracleKind::group) {
          return std::nullopt;
        }
        for (std::size_t y = 0; y < table_.elements; ++y) {
          if (table_.rows[static_cast<std::size_t>(x[0])][y] == static_cast<std::size_t>(*identity_)) {
            return Element{static_cast<std::int64_t>(y)};
          }
        }
        return std::nullopt;
      }
      std::vector<Element> neighbors(Element const& x) const override {
        std::vector<Element> out;
        for (Symbol a = 0; a < static_cast<Symbol>(gens_.size()); ++a) {
          out.push_back(multiply(x, generator(a)));
        }
        if (x[0] >= 0) {
          for (auto y : preds_[static_cast<std::size_t>(x[0])]) {
            out.push_back({y});
          }
        }
        return out;
      }
      std::string describe(Element const& x) const override {
        return x[0] < 0 ? std::string("1") : std::to_string(x[0]);
      }

     private:
      MultiplicationTable                      table_;
      std::vector<std::int64_t>                gens_;
      std::optional<std::int64_t>              identity_;
      std::size_t                              generated_ = 0;
      OracleKind                               kind_      = OracleKind::semigroup;
      std::vector<std::vector<std::int64_t>>   preds_;
    };

    ////////////////////////////////////////////////////////////////////
    // ℤ^k and ℕ^k
    ////////////////////////////////////////////////////////////////////

    class LatticeOracle final : public SemigroupOracle {
     public:
      LatticeOracle(Alphabet a, std::vector<std::vector<std::int64_t>> vectors, bool natural)
          : SemigroupOracle(std::move(a)), vectors_(std::move(vectors)), natural_(natural) {
        if (vectors_.size() != alphabet().size()) {
          throw PreconditionError("one vector per letter expected");
        }
        dim_ = vectors_.empty() ? 0 : vectors_[0].size();
        for (auto const& v : vectors_) {
          if (v.size() != dim_) {
            throw PreconditionError("letter vectors must have the same dimension");
          }
          if (natural_ && std::any_of(v.begin(), v.end(), [](auto x) { return x < 0; })) {
            throw PreconditionError("nk letters must have non-negative coordinates");
          }
          nonzero_ = nonzero_ || std::any_of(v.begin(), v.end(), [](auto x) { return x != 0; });
        }
        group_ = !natural_;
        for (auto const& v : vectors_) {
          Element neg(v.size());
          std::transform(v.begin(), v.end(), neg.begin(), [](auto x) { return -x; });
          group_ = group_ && std::find(vectors_.begin(), vectors_.end(), neg) != vectors_.end();
        }
      }

      std::string name() const override {
        return natural_ ? "nk" : "zk";
      }
      OracleKind kind() const override {
        return group_ ? OracleKind::group : OracleKind::monoid;
      }
      Element generator(Symbol a) const override {
        check_letter(alphabet(), a);
        return vectors_[static_cast<std::size_t>(a)];
      }
      Element identity() const override {
        return Element(dim_, 0);
      }
      Element multiply(Element const& x, Element const& y) const override {
        Element out(dim_);
        for (std::size_t i = 0; i < dim_; ++i) {
          out[i] = x[i] + y[i];
        }
        return out;
      }
      bool certifies_infinite() const override {
        return nonzero_;
      }
      std::optional<Element> inverse(Element const& x) const override {
        if (!group_) {
          return std::nullopt;
        }
        Element out(dim_);
        std::transform(x.begin(), x.end(), out.begin(), [](auto v) { return -v; });
        return out;
      }
      std::vector<Element> neighbors(Element const& x) const override {
        if (!group_ && !natural_) {
          return SemigroupOracle::neighbors(x);  // throws
        }
        std::vector<Element> out;
        for (auto const& g : vectors_) {
          Element up(dim_), down(dim_);
          bool    ok = true;
          for (std::size_t i = 0; i < dim_; ++i) {
            up[i]   = x[i] + g[i];
            down[i] = x[i] - g[i];
            ok      = ok && (!natural_ || down[i] >= 0);
          }
          out.push_back(std::move(up));
          if (ok) {
            out.push_back(std::move(down));
          }
        }
        return out;
      }
      std::string describe(Element const& x) const override {
        std::ostringstream out;
        out << '(';
        for (std::size_t i = 0; i < x.size(); ++i) {
          out << (i ? "," : "") << x[i];
        }
        out << ')';
        return out.str();
      }

     private:
      std::vector<std::vector<std::int64_t>> vectors_;
      bool                                   natural_;
      bool                                   group_   = false;
      bool                                   nonzero_ = false;
      std::size_t                            dim_     = 0;
    };

    ////////////////////////////////////////////////////////////////////
    // Free monoid and free group
    ////////////////////////////////////////////////////////////////////

    class FreeMonoidOracle final : public SemigroupOracle {
     public:
      using SemigroupOracle::SemigroupOracle;

      std::string name() const override {
        return "free_monoid";
      }
      OracleKind kind() const override {
        return OracleKind::monoid;
      }
      Element generator(Symbol a) const override {
        check_letter(alphabet(), a);
        return {a};
      }
      Element identity() const override {
        return {};
      }
      Element multiply(Element const& x, Element const& y) const override {
        Element out = x;
        out.insert(out.end(), y.begin(), y.end());
        return out;
      }
      bool certifies_infinite() const override {
        return !alphabet().empty();
      }
      std::vector<Element> neighbors(Element const& x) const override {
        std::vector<Element> out;
        for (Symbol a = 0; a < static_cast<Symbol>(alphabet().size()); ++a) {
          out.push_back(multiply(x, {a}));
        }
        if (!x.empty()) {
          out.emplace_back(x.begin(), x.end() - 1);
        }
        return out;
      }
      std::string describe(Element const& x) const override {
        Word w(x.begin(), x.end());
        return w.empty() ? "ε" : alphabet().format(w);
      }
    };

    class FreeGroupOracle final : public SemigroupOracle {
     public:
      explicit FreeGroupOracle(Alphabet a) : SemigroupOracle(std::move(a)) {
        for (auto const& tok : alphabet().tokens()) {
          std::string partner = !tok.empty() && tok.back() == '^' ? tok.substr(0, tok.size() - 1)
                                                                   : tok + "^";
          auto        p       = alphabet().find(partner);
          if (!p) {
            throw PreconditionError("free group alphabet lacks the inverse of \"" + tok + "\"");
          }
          inv_.push_back(*p);
        }
      }

      std::string name() const override {
        return "free_group";
      }
      OracleKind kind() const override {
        return OracleKind::group;
      }
      Element generator(Symbol a) const override {
        check_letter(alphabet(), a);
        return {a};
      }
      Element identity() const override {
        return {};
      }
      Element multiply(Element const& x, Element const& y) const override {
        Element out = x;
        for (auto s : y) {
          if (!out.empty() && out.back() == inv_[static_cast<std::size_t>(s)]) {
            out.pop_back();
          } else {
            out.push_back(s);
          }
        }
        return out;
      }
      std::optional<Element> inverse(Element const& x) const override {
        Element out;
        for (auto it = x.rbegin(); it != x.rend(); ++it) {
          out.push_back(inv_[static_cast<std::size_t>(*it)]);
        }
        return out;
      }
      bool certifies_infinite() const override {
        return !alphabet().empty();
      }
      std::string describe(Element const& x) const override {
        Word w(x.begin(), x.end());
        return w.empty() ? "ε" : alphabet().format(w);
      }

     private:
      std::vector<std::int64_t> inv_;
    };

    ////////////////////////////////////////////////////////////////////
    // Bicyclic monoid
    ////////////////////////////////////////////////////////////////////

    class BicyclicOracle final : public SemigroupOracle {
     public:
      BicyclicOracle(Alphabet a, Symbol b, Symbol c) : SemigroupOracle(std::move(a)), b_(b), c_(c) {
        if (alphabet().size() != 2 || b == c) {
          throw PreconditionError("bicyclic oracle needs exactly two letters");
        }
        check_letter(alphabet(), b);
        check_letter(alphabet(), c);
      }

      std::string name() const override {
        return "bicyclic";
      }
      OracleKind kind() const override {
        return OracleKind::monoid;
      }
      // (i, j) stands for c^i b^j
      Element generator(Symbol a) const override {
        check_letter(alphabet(), a);
        return a == b_ ? Element{0, 1} : Element{1, 0};
      }
      Element identity() const override {
        return {0, 0};
      }
      Element multiply(Element const& x, Element const& y) const override {
        auto i = x[0], j = x[1], k = y[0], l = y[1];
        if (j >= k) {
          return {i, j - k + l};
        }
        return {i + k - j, l};
      }
      bool certifies_infinite() const override {
        return true;
      }
      std::vector<Element> neighbors(Element const& x) const override {
        auto                 i = x[0], j = x[1];
        std::vector<Element> out{multiply(x, {0, 1}), multiply(x, {1, 0}), {i, j + 1}};
        if (j > 0) {
          out.push_back({i, j - 1});
        }
        if (j == 0 && i > 0) {
          out.push_back({i - 1, 0});
        }
        return out;
      }
      std::string describe(Element const& x) const override {
        return "c^" + std::to_string(x[0]) + " b^" + std::to_string(x[1]);
      }

     private:
      Symbol b_, c_;
    };

    ////////////////////////////////////////////////////////////////////
    // Wrappers
    ////////////////////////////////////////////////////////////////////

    class IdentityLetterOracle final : public SemigroupOracle {
     public:
      IdentityLetterOracle(OraclePtr base, std::string const& token)
          : SemigroupOracle(base->alphabet().extended({token})), base_(std::move(base)) {}

      std::string name() const override {
        return base_->name() + "+1";
      }
      OracleKind kind() const override {
        return base_->kind() == OracleKind::semigroup ? OracleKind::monoid : base_->kind();
      }
      Element generator(Symbol a) const override {
        check_letter(alphabet(), a);
        if (static_cast<std::size_t>(a) == base_->alphabet().size()) {
          return base_->identity();
        }
        return base_->generator(a);
      }
      Element identity() const override {
        return base_->identity();
      }
      Element multiply(Element const& x, Element const& y) const override {
        return base_->multiply(x, y);
      }
      std::optional<std::size_t> size() const override {
        auto n = base_->size();
        if (n && base_->kind() == OracleKind::semigroup) {
          return *n + 1;
        }
        return n;
      }
      bool certifies_infinite() const override {
        return base_->certifies_infinite();
      }
      std::optional<Element> inverse(Element const& x) const override {
        return base_->inverse(x);
      }
      std::vector<Element> neighbors(Element const& x) const override {
        return base_->neighbors(x);
      }
      std::string describe(Element const& x) const override {
        return base_->describe(x);
      }

     private:
      OraclePtr base_;
    };

    class RecodedOracle final : public SemigroupOracle {
     public:
      RecodedOracle(OraclePtr base, Alphabet b, std::vector<Word> lift)
          : SemigroupOracle(std::move(b)), base_(std::move(base)) {
        if (lift.size() != alphabet().size()) {
          throw PreconditionError("one lift word per letter expected");
        }
        for (auto const& w : lift) {
          gens_.push_back(base_->eval(w));
        }
      }

      std::string name() const override {
        return base_->name() + "/recoded";
      }
      OracleKind kind() const override {
        return base_->kind();
      }
      Element generator(Symbol a) const override {
        check_letter(alphabet(), a);
        return gens_[static_cast<std::size_t>(a)];
      }
      Element identity() const override {
        return base_->identity();
      }
      Element multiply(Element const& x, Element const& y) const override {
        return base_->multiply(x, y);
      }
      bool certifies_infinite() const override {
        return base_->certifies_infinite();
      }
      std::optional<Element> inverse(Element const& x) const override {
        return base_->inverse(x);
      }
      std::string describe(Element const& x) const override {
        return base_->describe(x);
      }

     private:
      OraclePtr            base_;
      std::vector<Element> gens_;
    };

  }  // namespace

  MultiplicationTable parse_table(std::string_view text) {
    MultiplicationTable table;
    bool                have_size = false, have_gens = false;
    for (auto const& line : detail::tokenize_lines(text)) {
      auto const& key = line.fields[0];
      if (key == "elements") {
        if (have_size || line.fields.size() != 2) {
          throw ParseError("expected a single \"elements N\" line", line.number);
        }
        table.elements = detail::parse_index(line.fields[1], line.number);
        if (table.elements == 0) {
          throw ParseError("a table needs at least one element", line.number);
        }
        have_size = true;
      } else if (key == "generators") {
        if (!have_size) {
          throw ParseError("\"elements\" must come first", line.number);
        }
        for (std::size_t i = 1; i < line.fields.size(); ++i) {
          auto const& f  = line.fields[i];
          auto        eq = f.find('=');
          if (eq == std::string::npos || eq == 0) {
            throw ParseError("expected NAME=INDEX, got \"" + f + "\"", line.number);
          }
          auto idx = detail::parse_index(f.substr(eq + 1), line.number);
          if (idx >= table.elements) {
            throw ParseError("generator index out of range", line.number);
          }
          table.generators.emplace_back(f.substr(0, eq), idx);
        }
        have_gens = true;
      } else {
        if (!have_size || !have_gens) {
          throw ParseError("table rows must follow \"elements\" and \"generators\"", line.number);
        }
        if (line.fields.size() != table.elements) {
          throw ParseError("row has " + std::to_string(line.fields.size()) + " entries, expected "
                               + std::to_string(table.elements),
                           line.number);
        }
        std::vector<std::size_t> row;
        for (auto const& f : line.fields) {
          auto v = detail::parse_index(f, line.number);
          if (v >= table.elements) {
            throw ParseError("entry " + f + " out of range", line.number);
          }
          row.push_back(v);
        }
        if (table.rows.size() == table.elements) {
          throw ParseError("too many rows", line.number);
        }
        table.rows.push_back(std::move(row));
      }
    }
    if (!have_size || !have_gens) {
      throw ParseError("missing \"elements\" or \"generators\" line", 0);
    }
    if (table.rows.size() != table.elements) {
      throw ParseError("expected " + std::to_string(table.elements) + " rows", 0);
    }
    auto const& r = table.rows;
    for (std::size_t x = 0; x < table.elements; ++x) {
      for (std::size_t y = 0; y < table.elements; ++y) {
        for (std::size_t z = 0; z < table.elements; ++z) {
          if (r[r[x][y]][z] != r[x][r[y][z]]) {
            throw ParseError("table is not associative at (" + std::to_string(x) + ","
                                 + std::to_string(y) + "," + std::to_string(z) + ")",
                             0);
          }
        }
      }
    }
    return table;
  }

  OraclePtr table_oracle(MultiplicationTable const& table, std::optional<Alphabet> alphabet) {
    std::vector<std::string> names;
    for (auto const& [n, idx] : table.generators) {
      names.push_back(n);
    }
    Alphabet                  a = alphabet ? *alphabet : Alphabet(names);
    std::vector<std::int64_t> gens;
    for (auto const& tok : a.tokens()) {
      auto it = std::find(names.begin(), names.end(), tok);
      if (it == names.end()) {
        throw AlphabetMismatch("table has no generator \"" + tok + "\"");
      }
      gens.push_back(static_cast<std::int64_t>(table.generators[static_cast<std::size_t>(it - names.begin())].second));
    }
    return std::make_shared<TableOracle>(table, std::move(a), std::move(gens));
  }

  OraclePtr zk_oracle(Alphabet const& a, std::vector<std::vector<std::int64_t>> const& vectors) {
    return std::make_shared<LatticeOracle>(a, vectors, false);
  }

  OraclePtr nk_oracle(Alphabet const& a, std::vector<std::vector<std::int64_t>> const& vectors) {
    return std::make_shared<LatticeOracle>(a, vectors, true);
  }

  OraclePtr free_monoid_oracle(Alphabet const& a) {
    return std::make_shared<FreeMonoidOracle>(a);
  }

  OraclePtr free_group_oracle(Alphabet const& a) {
    return std::make_shared<FreeGroupOracle>(a);
  }

  OraclePtr bicyclic_oracle(Alphabet const& a, Symbol b, Symbol c) {
    return std::make_shared<BicyclicOracle>(a, b, c);
  }

  OraclePtr with_identity_letter(OraclePtr base, std::string const& token) {
    return std::make_shared<IdentityLetterOracle>(std::move(base), token);
  }

  OraclePtr recoded_oracle(OraclePtr base, Alphabet const& b, std::vector<Word> const& lift) {
    return std::make_shared<RecodedOracle>(std::move(base), b, lift);
  }

  namespace {
    constexpr std::size_t kVisitLimit = 5'000'000;
  }

  std::optional<std::size_t> cayley_distance(SemigroupOracle const& o, Element const& s,
                                             Element const& t, std::size_t cap) {
    if (s == t) {
      return 0;
    }
    std::unordered_map<Element, std::size_t, ElementHash> dist{{s, 0}};
    std::deque<Element>                                   queue{s};
    while (!queue.empty()) {
      Element x = std::move(queue.front());
      queue.pop_front();
      auto d = dist[x];
      if (d == cap) {
        continue;
      }
      for (auto& y : o.neighbors(x)) {
        if (dist.count(y) != 0) {
          continue;
        }
        if (y == t) {
          return d + 1;
        }
        if (dist.size() >= kVisitLimit) {
          throw ResourceLimit("cayley_distance: visited more than "
                              + std::to_string(kVisitLimit) + " elements");
        }
        dist.emplace(y, d + 1);
        queue.push_back(std::move(y));
      }
    }
    return std::nullopt;
  }

  std::vector<Element> ball(SemigroupOracle const& o, std::size_t radius, std::size_t cap) {
    std::vector<Element>                                  out{o.identity()};
    std::unordered_map<Element, std::size_t, ElementHash> dist{{out[0], 0}};
    for (std::size_t i = 0; i < out.size(); ++i) {
      auto d = dist[out[i]];
      if (d == radius) {
        continue;
      }
      for (auto& y : o.neighbors(out[i])) {
        if (dist.emplace(y, d + 1).second) {
          if (out.size() >= cap) {
            throw ResourceLimit("ball: more than " + std::to_string(cap) + " elements");
          }
          out.push_back(std::move(y));
        }
      }
    }
    return out;
  }

  std::optional<Word> connecting_word(SemigroupOracle const& o, Element const& x,
                                      Element const& y, std::size_t max_len, std::size_t cap) {
    if (x == y) {
      return Word{};
    }
    struct Node {
      Element     e;
      std::size_t parent;
      Symbol      letter;
      std::size_t depth;
    };
    std::vector<Node>                            nodes{{x, 0, kEpsilon, 0}};
    std::unordered_set<Element, ElementHash>     seen{x};
    std::vector<Element>                         gens;
    for (Symbol a = 0; a < static_cast<Symbol>(o.alphabet().size()); ++a) {
      gens.push_back(o.generator(a));
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (nodes[i].depth == max_len) {
        continue;
      }
      for (Symbol a = 0; a < static_cast<Symbol>(gens.size()); ++a) {
        auto z = o.multiply(nodes[i].e, gens[static_cast<std::size_t>(a)]);
        if (!seen.insert(z).second) {
          continue;
        }
        if (nodes.size() >= cap) {
          throw ResourceLimit("connecting_word: more than " + std::to_string(cap) + " elements");
        }
        nodes.push_back({z, i, a, nodes[i].depth + 1});
        if (z == y) {
          Word        w;
          std::size_t k = nodes.size() - 1;
          while (k != 0) {
            w.push_back(nodes[k].letter);
            k = nodes[k].parent;
          }
          std::reverse(w.begin(), w.end());
          return w;
        }
      }
    }
    return std::nullopt;
  }

}  // namespace qa
