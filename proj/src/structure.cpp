#include "gromov/structure.hpp"

#include <algorithm>
#include <cctype>

namespace gromov {

std::vector<NodePair> GromovStructure::image() const {
  std::vector<NodePair> pairs;
  pairs.reserve(n_);
  for (int a = 1; a <= n_; ++a) pairs.push_back(picks_[a]);
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  return pairs;
}

GromovStructure make_structure(int n,
                               const std::vector<std::array<int, 3>>& picks) {
  if (n < kMinStructurePoints || n > kMaxPoints) throw UnsupportedN(n);
  if (static_cast<int>(picks.size()) != n)
    throw WrongTokenCount(n, static_cast<int>(picks.size()));

  GromovStructure s;
  s.n_ = static_cast<std::uint8_t>(n);
  std::array<bool, kMaxPoints + 1> seen{};
  for (const auto& [a, b, c] : picks) {
    if (a < 1 || a > n) throw IndexOutOfRange(a);
    if (b < 1 || b > n) throw IndexOutOfRange(b);
    if (c < 1 || c > n) throw IndexOutOfRange(c);
    if (b == a || c == a || b == c) throw PairContainsOwner(a);
    if (seen[a]) throw DuplicateNode(a);
    seen[a] = true;
    s.picks_[a] = NodePair(b, c);
  }
  return s;  // every owner seen exactly once: n picks, no duplicates
}

Permutation::Permutation(const std::vector<int>& images) {
  const int n = static_cast<int>(images.size());
  if (n < 1 || n > kMaxPoints) throw UnsupportedN(n);
  n_ = static_cast<std::uint8_t>(n);
  std::array<bool, kMaxPoints + 1> seen{};
  for (int a = 1; a <= n; ++a) {
    const int v = images[a - 1];
    if (v < 1 || v > n) throw IndexOutOfRange(v);
    if (seen[v]) throw DuplicateNode(v);
    seen[v] = true;
    images_[a] = static_cast<std::uint8_t>(v);
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> ids(n);
  for (int a = 1; a <= n; ++a) ids[a - 1] = a;
  return Permutation(ids);
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(n_);
  for (int a = 1; a <= n_; ++a) inv[images_[a] - 1] = a;
  return Permutation(inv);
}

Permutation operator*(const Permutation& first, const Permutation& second) {
  if (first.size() != second.size())
    throw LengthMismatch(first.size(), second.size());
  std::vector<int> images(first.size());
  for (int a = 1; a <= first.size(); ++a)
    images[a - 1] = first.image(second.image(a));
  return Permutation(images);
}

GromovStructure apply_permutation(const GromovStructure& s,
                                  const Permutation& p) {
  if (p.size() != s.size()) throw LengthMismatch(s.size(), p.size());
  std::vector<std::array<int, 3>> picks;
  picks.reserve(s.size());
  for (int a = 1; a <= s.size(); ++a) {
    const NodePair pr = s.pick(a);
    picks.push_back({p.image(a), p.image(pr.lo), p.image(pr.hi)});
  }
  return make_structure(s.size(), picks);
}

std::string serialize(const GromovStructure& s) {
  std::string out;
  out.reserve(static_cast<std::size_t>(s.size()) * 4);
  for (int a = 1; a <= s.size(); ++a) {
    if (a > 1) out += ',';
    const NodePair p = s.pick(a);
    out += static_cast<char>('0' + a);
    out += static_cast<char>('0' + p.lo);
    out += static_cast<char>('0' + p.hi);
  }
  return out;
}

namespace {

bool all_digits(const std::string& t) {
  return !t.empty() && std::all_of(t.begin(), t.end(), [](unsigned char ch) {
    return std::isdigit(ch) != 0;
  });
}

int parse_node(const std::string& chunk, const std::string& text) {
  if (!all_digits(text)) throw MalformedToken(chunk);
  return std::stoi(text);
}

// "a:b,c" long-form token.
std::array<int, 3> parse_long_token(const std::string& chunk) {
  const auto colon = chunk.find(':');
  const auto comma = chunk.find(',', colon + 1);
  if (colon == std::string::npos || comma == std::string::npos)
    throw MalformedToken(chunk);
  return {parse_node(chunk, chunk.substr(0, colon)),
          parse_node(chunk, chunk.substr(colon + 1, comma - colon - 1)),
          parse_node(chunk, chunk.substr(comma + 1))};
}

}  // namespace

GromovStructure parse(const std::string& text, int n) {
  // Whitespace first, then commas inside each chunk; long-form chunks keep
  // their internal comma.
  std::vector<std::array<int, 3>> picks;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
      ++i;
    if (i >= text.size()) break;
    std::size_t j = i;
    while (j < text.size() &&
           !std::isspace(static_cast<unsigned char>(text[j])))
      ++j;
    const std::string chunk = text.substr(i, j - i);
    i = j;

    if (chunk.find(':') != std::string::npos) {
      picks.push_back(parse_long_token(chunk));
      continue;
    }
    std::size_t start = 0;
    while (start <= chunk.size()) {
      const auto comma = chunk.find(',', start);
      const std::string tok =
          chunk.substr(start, comma == std::string::npos ? std::string::npos
                                                         : comma - start);
      start = comma == std::string::npos ? chunk.size() + 1 : comma + 1;
      if (tok.empty()) continue;
      if (tok.size() != 3 || !all_digits(tok)) throw MalformedToken(tok);
      picks.push_back({tok[0] - '0', tok[1] - '0', tok[2] - '0'});
    }
  }
  if (static_cast<int>(picks.size()) != n)
    throw WrongTokenCount(n, static_cast<int>(picks.size()));
  return make_structure(n, picks);
}

std::vector<Permutation> all_permutations(int n) {
  std::vector<int> images(n);
  for (int a = 0; a < n; ++a) images[a] = a + 1;
  std::vector<Permutation> perms;
  do {
    perms.emplace_back(images);
  } while (std::next_permutation(images.begin(), images.end()));
  return perms;
}

}  // namespace gromov
