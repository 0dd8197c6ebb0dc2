#include "harmlab/cayley.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <map>
#include <sstream>

namespace harmlab {

namespace {

[[noreturn]] void unsupported(const std::string& what) { throw Error(ErrorKind::UnsupportedGroup, what); }

std::string gen_name(int i) { return "s" + std::to_string(i + 1); }

std::int64_t checked(__int128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
    throw Error(ErrorKind::NumericalFailure, "group element exceeds 64-bit normal form");
  return static_cast<std::int64_t>(v);
}

class FreeAbelianGroup final : public Group {
 public:
  FreeAbelianGroup(int d, const std::vector<std::vector<std::int64_t>>& custom) : d_(d) {
    if (d < 1 || d > 16) unsupported("Z^d needs 1 <= d <= 16");
    std::vector<Generator> gens;
    if (custom.empty()) {
      for (int i = 0; i < d; ++i) {
        GroupElement e(static_cast<std::size_t>(d), 0);
        e[static_cast<std::size_t>(i)] = 1;
        gens.push_back({gen_name(i), e});
      }
    } else {
      for (std::size_t i = 0; i < custom.size(); ++i) {
        if (custom[i].size() != static_cast<std::size_t>(d)) unsupported("custom Z^d generator has wrong length");
        gens.push_back({gen_name(static_cast<int>(i)), custom[i]});
      }
    }
    set_generators(std::move(gens));
  }
  std::string name() const override { return "zd:" + std::to_string(d_); }
  GroupElement identity() const override { return GroupElement(static_cast<std::size_t>(d_), 0); }
  GroupElement multiply(const GroupElement& a, const GroupElement& b) const override {
    GroupElement out(a);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
    return out;
  }
  GroupElement inverse(const GroupElement& a) const override {
    GroupElement out(a);
    for (auto& x : out) x = -x;
    return out;
  }

 private:
  int d_;
};

// Reduced words over letters +-(i+1).
class FreeGroup final : public Group {
 public:
  FreeGroup(int k, const std::vector<std::vector<std::int64_t>>& custom) : k_(k) {
    if (k < 1 || k > 16) unsupported("free(k) needs 1 <= k <= 16");
    std::vector<Generator> gens;
    if (custom.empty()) {
      for (int i = 0; i < k; ++i) gens.push_back({gen_name(i), GroupElement{i + 1}});
    } else {
      for (std::size_t i = 0; i < custom.size(); ++i) {
        GroupElement w = identity();
        for (auto letter : custom[i]) {
          if (letter == 0 || letter > k || letter < -k) unsupported("custom free generator uses an invalid letter");
          w = multiply(w, GroupElement{letter});
        }
        gens.push_back({gen_name(static_cast<int>(i)), w});
      }
    }
    set_generators(std::move(gens));
  }
  std::string name() const override { return "free:" + std::to_string(k_); }
  GroupElement identity() const override { return {}; }
  GroupElement multiply(const GroupElement& a, const GroupElement& b) const override {
    GroupElement out(a);
    std::size_t i = 0;
    while (i < b.size() && !out.empty() && out.back() == -b[i]) {
      out.pop_back();
      ++i;
    }
    out.insert(out.end(), b.begin() + static_cast<std::ptrdiff_t>(i), b.end());
    return out;
  }
  GroupElement inverse(const GroupElement& a) const override {
    GroupElement out(a.rbegin(), a.rend());
    for (auto& x : out) x = -x;
    return out;
  }
  std::string format(const GroupElement& a) const override {
    if (a.empty()) return "e";
    std::string s;
    for (auto x : a) {
      if (!s.empty()) s += ' ';
      s += gen_name(static_cast<int>(std::abs(x)) - 1);
      if (x < 0) s += "^-1";
    }
    return s;
  }

 private:
  int k_;
};

// C_q wreath Z^d. Layout: cursor (d entries), then (position (d), value) per
// lit lamp, lamps sorted by position.
class LamplighterGroup final : public Group {
 public:
  LamplighterGroup(int q, int d) : q_(q), d_(d) {
    if (q < 2 || q > 1000) unsupported("lamplighter needs 2 <= q <= 1000");
    if (d < 1 || d > 4) unsupported("lamplighter base rank must lie in [1,4]");
    std::vector<Generator> gens;
    for (int i = 0; i < d; ++i) {
      GroupElement e = identity();
      e[static_cast<std::size_t>(i)] = 1;
      gens.push_back({gen_name(i), e});
    }
    GroupElement lamp = identity();
    for (int i = 0; i < d; ++i) lamp.push_back(0);
    lamp.push_back(1);
    gens.push_back({"l", lamp});
    set_generators(std::move(gens));
  }
  std::string name() const override { return "lamplighter:" + std::to_string(q_) + "," + std::to_string(d_); }
  GroupElement identity() const override { return GroupElement(static_cast<std::size_t>(d_), 0); }

  GroupElement multiply(const GroupElement& a, const GroupElement& b) const override {
    const auto d = static_cast<std::size_t>(d_);
    std::map<std::vector<std::int64_t>, std::int64_t> lamps;
    for (std::size_t i = d; i < a.size(); i += d + 1)
      lamps[std::vector<std::int64_t>(a.begin() + static_cast<std::ptrdiff_t>(i),
                                      a.begin() + static_cast<std::ptrdiff_t>(i + d))] = a[i + d];
    for (std::size_t i = d; i < b.size(); i += d + 1) {
      std::vector<std::int64_t> pos(d);
      for (std::size_t k = 0; k < d; ++k) pos[k] = b[i + k] + a[k];
      auto& v = lamps[pos];
      v = (v + b[i + d]) % q_;
    }
    GroupElement out(d);
    for (std::size_t k = 0; k < d; ++k) out[k] = a[k] + b[k];
    for (const auto& [pos, v] : lamps) {
      if (v == 0) continue;
      out.insert(out.end(), pos.begin(), pos.end());
      out.push_back(v);
    }
    return out;
  }
  GroupElement inverse(const GroupElement& a) const override {
    const auto d = static_cast<std::size_t>(d_);
    // (f,x)^-1 = (-shift_{-x} f, -x)
    std::map<std::vector<std::int64_t>, std::int64_t> lamps;
    for (std::size_t i = d; i < a.size(); i += d + 1) {
      std::vector<std::int64_t> pos(d);
      for (std::size_t k = 0; k < d; ++k) pos[k] = a[i + k] - a[k];
      lamps[pos] = (q_ - a[i + d]) % q_;
    }
    GroupElement out(d);
    for (std::size_t k = 0; k < d; ++k) out[k] = -a[k];
    for (const auto& [pos, v] : lamps) {
      out.insert(out.end(), pos.begin(), pos.end());
      out.push_back(v);
    }
    return out;
  }

 private:
  int q_;
  int d_;
};

// Integer Heisenberg group, (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab').
class HeisenbergGroup final : public Group {
 public:
  HeisenbergGroup() {
    set_generators({{gen_name(0), {1, 0, 0}}, {gen_name(1), {0, 1, 0}}});
  }
  std::string name() const override { return "heisenberg"; }
  GroupElement identity() const override { return {0, 0, 0}; }
  GroupElement multiply(const GroupElement& a, const GroupElement& b) const override {
    return {a[0] + b[0], a[1] + b[1], checked(static_cast<__int128>(a[2]) + b[2] + static_cast<__int128>(a[0]) * b[1])};
  }
  GroupElement inverse(const GroupElement& a) const override {
    return {-a[0], -a[1], checked(-static_cast<__int128>(a[2]) + static_cast<__int128>(a[0]) * a[1])};
  }
};

// BS(1,n) as affine maps x -> n^e x + m with m = k / n^j in lowest terms.
// Layout (k, j, e). Generators a = (1,0,0), t = (0,0,1).
class BaumslagSolitarGroup final : public Group {
 public:
  explicit BaumslagSolitarGroup(int n) : n_(n) {
    if (n < 2 || n > 64) unsupported("bs:1,n needs 2 <= n <= 64");
    set_generators({{gen_name(0), {1, 0, 0}}, {gen_name(1), {0, 0, 1}}});
  }
  std::string name() const override { return "bs:1," + std::to_string(n_); }
  GroupElement identity() const override { return {0, 0, 0}; }
  GroupElement multiply(const GroupElement& a, const GroupElement& b) const override {
    auto [k2, j2] = scale(b[0], b[1], a[2]);
    auto [k, j] = add(a[0], a[1], k2, j2);
    return {k, j, checked(static_cast<__int128>(a[2]) + b[2])};
  }
  GroupElement inverse(const GroupElement& a) const override {
    auto [k, j] = scale(-a[0], a[1], -a[2]);
    return {k, j, -a[2]};
  }
  std::string format(const GroupElement& a) const override {
    std::ostringstream os;
    os << "(" << a[0] << "/" << n_ << "^" << a[1] << "," << a[2] << ")";
    return os.str();
  }

 private:
  using Rational = std::pair<std::int64_t, std::int64_t>;

  __int128 power(std::int64_t e) const {
    if (e < 0 || e > 126) throw Error(ErrorKind::NumericalFailure, "exponent out of range");
    __int128 p = 1;
    for (std::int64_t i = 0; i < e; ++i) {
      p *= n_;
      if (p > static_cast<__int128>(std::numeric_limits<std::int64_t>::max()))
        throw Error(ErrorKind::NumericalFailure, "group element exceeds 64-bit normal form");
    }
    return p;
  }
  Rational normalize(__int128 k, std::int64_t j) const {
    if (k == 0) return {0, 0};
    while (j > 0 && k % n_ == 0) {
      k /= n_;
      --j;
    }
    return {checked(k), j};
  }
  // (k / n^j) * n^e
  Rational scale(std::int64_t k, std::int64_t j, std::int64_t e) const {
    const std::int64_t nj = j - e;
    if (nj >= 0) return normalize(k, nj);
    return normalize(static_cast<__int128>(k) * power(-nj), 0);
  }
  Rational add(std::int64_t k1, std::int64_t j1, std::int64_t k2, std::int64_t j2) const {
    const std::int64_t j = std::max(j1, j2);
    const __int128 sum = static_cast<__int128>(k1) * power(j - j1) + static_cast<__int128>(k2) * power(j - j2);
    return normalize(sum, j);
  }

  int n_;
};

// Infinite dihedral group as (k, eps) acting by x -> eps x + k.
class DihedralInfiniteGroup final : public Group {
 public:
  DihedralInfiniteGroup() { set_generators({{gen_name(0), {0, -1}}, {gen_name(1), {1, -1}}}); }
  std::string name() const override { return "dinf"; }
  GroupElement identity() const override { return {0, 1}; }
  GroupElement multiply(const GroupElement& a, const GroupElement& b) const override {
    return {a[0] + a[1] * b[0], a[1] * b[1]};
  }
  GroupElement inverse(const GroupElement& a) const override { return {-a[1] * a[0], a[1]}; }
};

std::uint64_t hash_element(std::span<const std::int64_t> e) {
  std::uint64_t h = 0x9E3779B97F4A7C15ull ^ e.size();
  for (auto x : e) {
    std::uint64_t z = static_cast<std::uint64_t>(x) + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    h ^= z ^ (z >> 31);
  }
  return h;
}

std::vector<long long> split_ints(std::string_view body, char sep) {
  std::vector<long long> out;
  if (body.empty()) return out;
  std::size_t pos = 0;
  while (true) {
    const auto cut = body.find(sep, pos);
    const auto tok = body.substr(pos, cut == std::string_view::npos ? body.size() - pos : cut - pos);
    long long v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || tok.empty())
      unsupported("malformed group spec argument '" + std::string(tok) + "'");
    out.push_back(v);
    if (cut == std::string_view::npos) break;
    pos = cut + 1;
  }
  return out;
}

}  // namespace

std::string Group::format(const GroupElement& a) const {
  std::string s = "(";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(a[i]);
  }
  return s + ")";
}

int Group::generator_index(std::string_view name) const {
  for (std::size_t i = 0; i < generators_.size(); ++i)
    if (generators_[i].name == name) return static_cast<int>(i);
  throw Error(ErrorKind::InvalidArgument, "unknown generator '" + std::string(name) + "'");
}

GroupElement Group::evaluate(std::span<const int> word) const {
  GroupElement g = identity();
  for (int s : word) g = multiply(g, generators_.at(static_cast<std::size_t>(s)).element);
  return g;
}

void Group::set_generators(std::vector<Generator> gens) {
  const GroupElement id = identity();
  std::vector<Generator> out;
  auto index_of = [&](const GroupElement& e) -> int {
    for (std::size_t i = 0; i < out.size(); ++i)
      if (out[i].element == e) return static_cast<int>(i);
    return -1;
  };
  for (auto& g : gens) {
    if (g.element == id) unsupported("generator " + g.name + " is the identity");
    if (index_of(g.element) >= 0) continue;
    out.push_back(std::move(g));
    Generator& base = out.back();
    GroupElement inv = inverse(base.element);
    const int existing = index_of(inv);
    if (existing >= 0) {
      continue;
    }
    const std::string inv_name = base.name + "^-1";
    out.push_back({inv_name, std::move(inv)});
  }
  for (auto& g : out) g.inverse = index_of(inverse(g.element));
  generators_ = std::move(out);
}

GroupSpec parse_group_spec(std::string_view text) {
  GroupSpec spec;
  std::string_view head = text;
  std::string_view custom;
  if (auto at = text.find('@'); at != std::string_view::npos) {
    head = text.substr(0, at);
    custom = text.substr(at + 1);
  }
  const auto colon = head.find(':');
  const std::string_view kind = head.substr(0, colon);
  const std::vector<long long> args =
      colon == std::string_view::npos ? std::vector<long long>{} : split_ints(head.substr(colon + 1), ',');
  auto want = [&](std::size_t k) {
    if (args.size() != k) unsupported("group spec '" + std::string(text) + "' has wrong arity");
  };
  if (kind == "zd") {
    want(1);
    spec.kind = GroupKind::FreeAbelian;
    spec.rank = static_cast<int>(args[0]);
  } else if (kind == "free") {
    want(1);
    spec.kind = GroupKind::Free;
    spec.rank = static_cast<int>(args[0]);
  } else if (kind == "lamplighter") {
    want(2);
    spec.kind = GroupKind::Lamplighter;
    spec.q = static_cast<int>(args[0]);
    spec.rank = static_cast<int>(args[1]);
  } else if (kind == "heisenberg") {
    want(0);
    spec.kind = GroupKind::Heisenberg;
  } else if (kind == "bs") {
    want(2);
    if (args[0] != 1) unsupported("only BS(1,n) is supported");
    spec.kind = GroupKind::BaumslagSolitar;
    spec.n = static_cast<int>(args[1]);
  } else if (kind == "dinf") {
    want(0);
    spec.kind = GroupKind::DihedralInfinite;
  } else {
    unsupported("unknown group '" + std::string(text) + "'");
  }
  if (!custom.empty()) {
    if (spec.kind != GroupKind::FreeAbelian && spec.kind != GroupKind::Free)
      unsupported("custom generators are only allowed for zd and free");
    std::size_t pos = 0;
    while (pos <= custom.size()) {
      const auto cut = custom.find(';', pos);
      const auto tok = custom.substr(pos, cut == std::string_view::npos ? custom.size() - pos : cut - pos);
      auto values = split_ints(tok, ',');
      spec.custom_generators.emplace_back(values.begin(), values.end());
      if (cut == std::string_view::npos) break;
      pos = cut + 1;
    }
  }
  return spec;
}

std::string to_string(const GroupSpec& spec) {
  std::string s;
  switch (spec.kind) {
    case GroupKind::FreeAbelian: s = "zd:" + std::to_string(spec.rank); break;
    case GroupKind::Free: s = "free:" + std::to_string(spec.rank); break;
    case GroupKind::Lamplighter: s = "lamplighter:" + std::to_string(spec.q) + "," + std::to_string(spec.rank); break;
    case GroupKind::Heisenberg: s = "heisenberg"; break;
    case GroupKind::BaumslagSolitar: s = "bs:1," + std::to_string(spec.n); break;
    case GroupKind::DihedralInfinite: s = "dinf"; break;
  }
  for (std::size_t i = 0; i < spec.custom_generators.size(); ++i) {
    s += i == 0 ? '@' : ';';
    for (std::size_t k = 0; k < spec.custom_generators[i].size(); ++k) {
      if (k) s += ',';
      s += std::to_string(spec.custom_generators[i][k]);
    }
  }
  return s;
}

std::shared_ptr<const Group> build_group(const GroupSpec& spec) {
  switch (spec.kind) {
    case GroupKind::FreeAbelian: return std::make_shared<FreeAbelianGroup>(spec.rank, spec.custom_generators);
    case GroupKind::Free: return std::make_shared<FreeGroup>(spec.rank, spec.custom_generators);
    case GroupKind::Lamplighter:
      if (!spec.custom_generators.empty()) unsupported("custom generators are only allowed for zd and free");
      return std::make_shared<LamplighterGroup>(spec.q, spec.rank);
    case GroupKind::Heisenberg: return std::make_shared<HeisenbergGroup>();
    case GroupKind::BaumslagSolitar: return std::make_shared<BaumslagSolitarGroup>(spec.n);
    case GroupKind::DihedralInfinite: return std::make_shared<DihedralInfiniteGroup>();
  }
  unsupported("unknown group kind");
}

std::span<const std::int64_t> CayleyBall::raw_element(VertexId v) const {
  const auto i = static_cast<std::size_t>(v);
  return {arena_.data() + arena_offset_[i], arena_offset_[i + 1] - arena_offset_[i]};
}

GroupElement CayleyBall::element(VertexId v) const {
  auto raw = raw_element(v);
  return GroupElement(raw.begin(), raw.end());
}

std::optional<VertexId> CayleyBall::find(const GroupElement& g) const {
  const std::size_t mask = slots_.size() - 1;
  for (std::size_t i = hash_element(g) & mask;; i = (i + 1) & mask) {
    const std::uint32_t s = slots_[i];
    if (s == 0) return std::nullopt;
    const auto v = static_cast<VertexId>(s - 1);
    auto raw = raw_element(v);
    if (raw.size() == g.size() && std::equal(raw.begin(), raw.end(), g.begin())) return v;
  }
}

std::optional<VertexId> CayleyBall::step(VertexId v, int generator) const {
  const VertexId u = neighbor_[static_cast<std::size_t>(v) * static_cast<std::size_t>(generator_count_) +
                               static_cast<std::size_t>(generator)];
  if (u < 0) return std::nullopt;
  return u;
}

CayleyBall CayleyBall::build(std::shared_ptr<const Group> group, int radius, std::size_t cap) {
  if (radius < 1) throw Error(ErrorKind::InvalidArgument, "ball radius must be at least 1");
  if (cap > std::numeric_limits<std::uint32_t>::max() / 4)
    throw Error(ErrorKind::InvalidArgument, "ball cap too large");
  CayleyBall b;
  b.group_ = std::move(group);
  b.radius_ = radius;
  const auto& gens = b.group_->generators();
  const int S = static_cast<int>(gens.size());
  b.generator_count_ = S;
  b.arena_offset_.push_back(0);
  b.slots_.assign(1024, 0);

  auto grow = [&] {
    std::vector<std::uint32_t> fresh(b.slots_.size() * 2, 0);
    const std::size_t mask = fresh.size() - 1;
    for (std::uint32_t s : b.slots_) {
      if (s == 0) continue;
      std::size_t i = hash_element(b.raw_element(static_cast<VertexId>(s - 1))) & mask;
      while (fresh[i] != 0) i = (i + 1) & mask;
      fresh[i] = s;
    }
    b.slots_ = std::move(fresh);
  };
  // Returns the existing id or inserts when `allow_insert`.
  auto lookup = [&](const GroupElement& g, bool allow_insert, int wl) -> VertexId {
    const std::size_t mask = b.slots_.size() - 1;
    std::size_t i = hash_element(g) & mask;
    for (;; i = (i + 1) & mask) {
      const std::uint32_t s = b.slots_[i];
      if (s == 0) break;
      auto raw = b.raw_element(static_cast<VertexId>(s - 1));
      if (raw.size() == g.size() && std::equal(raw.begin(), raw.end(), g.begin()))
        return static_cast<VertexId>(s - 1);
    }
    if (!allow_insert) return -1;
    const std::size_t id = b.word_length_.size();
    if (id >= cap)
      throw Error(ErrorKind::BallTooLarge, "ball of radius " + std::to_string(radius) + " exceeds cap of " +
                                               std::to_string(cap) + " vertices");
    b.arena_.insert(b.arena_.end(), g.begin(), g.end());
    b.arena_offset_.push_back(b.arena_.size());
    b.word_length_.push_back(wl);
    b.slots_[i] = static_cast<std::uint32_t>(id + 1);
    if (2 * (id + 1) > b.slots_.size()) grow();
    return static_cast<VertexId>(id);
  };

  lookup(b.group_->identity(), true, 0);
  std::vector<std::pair<VertexId, VertexId>> pairs;
  std::vector<int> labels;
  for (std::size_t v = 0; v < b.word_length_.size(); ++v) {
    const int wl = b.word_length_[v];
    const GroupElement g = b.element(static_cast<VertexId>(v));
    for (int s = 0; s < S; ++s) {
      const GroupElement h = b.group_->multiply(g, gens[static_cast<std::size_t>(s)].element);
      const VertexId u = lookup(h, wl < radius, wl + 1);
      b.neighbor_.push_back(u);
      if (u > static_cast<VertexId>(v)) {
        pairs.emplace_back(static_cast<VertexId>(v), u);
        labels.push_back(s);
      }
    }
  }
  OrientedGraph::Options opts;
  opts.nominal_degree = S;
  b.graph_ = OrientedGraph::from_canonical_pairs(static_cast<VertexId>(b.word_length_.size()), pairs, opts);
  // from_canonical_pairs keeps the input edge order, so labels line up.
  b.edge_label_ = std::move(labels);
  return b;
}

std::vector<VertexId> CayleyBall::vertices_within(int r) const {
  std::vector<VertexId> out;
  for (std::size_t v = 0; v < word_length_.size(); ++v)
    if (word_length_[v] <= r) out.push_back(static_cast<VertexId>(v));
  return out;
}

nlohmann::json CayleyBall::to_json() const {
  nlohmann::json j = graph_to_json(graph_);
  nlohmann::json elements = nlohmann::json::array();
  for (VertexId v = 0; v < size(); ++v) elements.push_back(element(v));
  nlohmann::json gens = nlohmann::json::array();
  for (EdgeId e = 0; e < graph_.num_edges(); ++e)
    gens.push_back(group_->generators()[static_cast<std::size_t>(edge_label(e))].name);
  j["labels"] = {{"element", std::move(elements)},
                 {"word_length", word_length_},
                 {"generator", std::move(gens)},
                 {"group", group_->name()},
                 {"radius", radius_}};
  return j;
}

std::vector<EdgeStep> path_of_element(const CayleyBall& ball, std::span<const int> word, VertexId base) {
  std::vector<EdgeStep> path;
  VertexId v = base;
  for (int s : word) {
    if (s < 0 || s >= ball.generator_count()) throw Error(ErrorKind::InvalidArgument, "generator index out of range");
    auto next = ball.step(v, s);
    if (!next) throw Error(ErrorKind::PathExitsBall, "path leaves the ball at vertex " + std::to_string(v));
    auto e = ball.graph().find_edge(v, *next);
    const Edge& edge = ball.graph().edge(*e);
    path.push_back({*e, edge.tail == v ? +1 : -1});
    v = *next;
  }
  return path;
}

std::vector<int> parse_word(const Group& group, std::string_view text) {
  std::vector<int> word;
  std::size_t pos = 0;
  auto is_sep = [](char c) { return c == ' ' || c == ',' || c == '*' || c == '.'; };
  while (pos < text.size()) {
    while (pos < text.size() && is_sep(text[pos])) ++pos;
    std::size_t end = pos;
    while (end < text.size() && !is_sep(text[end])) ++end;
    if (end > pos) {
      const auto tok = text.substr(pos, end - pos);
      if (tok != "e") word.push_back(group.generator_index(tok));
    }
    pos = end;
  }
  return word;
}

std::vector<int> commutator_word(const Group& group, int x, int y) {
  const auto& gens = group.generators();
  return {x, y, gens.at(static_cast<std::size_t>(x)).inverse, gens.at(static_cast<std::size_t>(y)).inverse};
}

}  // namespace harmlab
