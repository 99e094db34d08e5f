#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mzv {

// Two alphabets:
//   X = {x0 < x1}, letters stored as 0, 1; weight = length.
//   Y = {y1 > y2 > y3 > ...}, letter y_s stored as s >= 1; weight = sum of s.
enum class Alphabet : std::uint8_t { X, Y };

// Smaller letter w.r.t. the alphabet order.
inline bool letter_less(Alphabet a, std::uint32_t p, std::uint32_t q) {
  return a == Alphabet::X ? p < q : p > q;
}

struct Word {
  Alphabet alph{Alphabet::X};
  std::vector<std::uint32_t> a;

  Word() = default;
  Word(Alphabet al, std::vector<std::uint32_t> letters) : alph(al), a(std::move(letters)) {
    for (std::uint32_t s : a) {
      if (alph == Alphabet::X ? s > 1 : s == 0)
        throw std::invalid_argument("bad letter for alphabet");
    }
  }

  std::size_t size() const { return a.size(); }
  bool empty() const { return a.empty(); }

  int weight() const {
    if (alph == Alphabet::X) return static_cast<int>(a.size());
    int w = 0;
    for (std::uint32_t s : a) w += static_cast<int>(s);
    return w;
  }

  bool operator==(const Word& o) const { return alph == o.alph && a == o.a; }
  bool operator!=(const Word& o) const { return !(*this == o); }

  std::string str() const {
    if (a.empty()) return "eps";
    std::string s;
    for (std::uint32_t c : a) {
      if (alph == Alphabet::X)
        s += (c == 0 ? "x0" : "x1");
      else
        s += "y" + std::to_string(c);
    }
    return s;
  }
};

// Lexicographic order for the alphabet order; a proper prefix is smaller.
inline bool lex_less(const Word& u, const Word& v) {
  assert(u.alph == v.alph);
  return std::lexicographical_compare(
      u.a.begin(), u.a.end(), v.a.begin(), v.a.end(),
      [&](std::uint32_t p, std::uint32_t q) { return letter_less(u.alph, p, q); });
}

// Canonical iteration order for maps keyed by words: weight, then lex.
inline bool word_less(const Word& u, const Word& v) {
  if (u.alph != v.alph) return u.alph < v.alph;
  int wu = u.weight(), wv = v.weight();
  if (wu != wv) return wu < wv;
  if (lex_less(u, v)) return true;
  if (lex_less(v, u)) return false;
  return u.a < v.a;  // unreachable for same-alphabet words, kept for strictness
}

inline bool operator<(const Word& u, const Word& v) { return word_less(u, v); }

inline Word concat(const Word& u, const Word& v) {
  assert(u.alph == v.alph || u.empty() || v.empty());
  Word w = u.empty() ? v : u;
  if (!u.empty() && !v.empty()) {
    w = u;
    w.a.insert(w.a.end(), v.a.begin(), v.a.end());
  }
  return w;
}

inline Word prepend(Alphabet al, std::uint32_t letter, const Word& u) {
  Word w;
  w.alph = al;
  w.a.reserve(u.a.size() + 1);
  w.a.push_back(letter);
  w.a.insert(w.a.end(), u.a.begin(), u.a.end());
  return w;
}

inline Word subword(const Word& w, std::size_t pos, std::size_t len) {
  Word u;
  u.alph = w.alph;
  u.a.assign(w.a.begin() + pos, w.a.begin() + pos + len);
  return u;
}

// Strictly smaller than all proper suffixes.
inline bool is_lyndon(const Word& w) {
  if (w.empty()) return false;
  for (std::size_t i = 1; i < w.size(); ++i) {
    Word s = subword(w, i, w.size() - i);
    if (!lex_less(w, s)) return false;
  }
  return true;
}

// All words of the given weight, lex-sorted.
inline std::vector<Word> all_words(Alphabet al, int weight) {
  std::vector<Word> out;
  if (weight == 0) {
    out.push_back(Word{al, {}});
    return out;
  }
  if (al == Alphabet::X) {
    std::vector<std::uint32_t> cur;
    auto rec = [&](auto&& self, int rem) -> void {
      if (rem == 0) {
        out.emplace_back(al, cur);
        return;
      }
      for (std::uint32_t c : {0u, 1u}) {
        cur.push_back(c);
        self(self, rem - 1);
        cur.pop_back();
      }
    };
    rec(rec, weight);
  } else {
    std::vector<std::uint32_t> cur;
    auto rec = [&](auto&& self, int rem) -> void {
      if (rem == 0) {
        out.emplace_back(al, cur);
        return;
      }
      for (std::uint32_t s = 1; s <= static_cast<std::uint32_t>(rem); ++s) {
        cur.push_back(s);
        self(self, rem - static_cast<int>(s));
        cur.pop_back();
      }
    };
    rec(rec, weight);
  }
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

// Lyndon words of weight 1..max_weight, sorted by weight then lex.
inline std::vector<Word> lyndon_generate(Alphabet al, int max_weight) {
  std::vector<Word> out;
  for (int w = 1; w <= max_weight; ++w)
    for (const Word& u : all_words(al, w))
      if (is_lyndon(u)) out.push_back(u);
  return out;
}

// w = uv with v the longest proper Lyndon suffix.
inline std::pair<Word, Word> standard_factorization(const Word& w) {
  if (w.size() < 2) throw std::invalid_argument("standard factorization needs length >= 2");
  if (!is_lyndon(w)) throw std::invalid_argument("standard factorization needs a Lyndon word");
  for (std::size_t i = 1; i < w.size(); ++i) {
    Word v = subword(w, i, w.size() - i);
    if (is_lyndon(v)) return {subword(w, 0, i), v};
  }
  throw std::logic_error("no Lyndon suffix");  // unreachable: last letter is Lyndon
}

// Nonincreasing Lyndon factorization (greedy longest Lyndon prefix).
inline std::vector<Word> lyndon_factorize(const Word& w) {
  std::vector<Word> fs;
  std::size_t pos = 0;
  while (pos < w.size()) {
    std::size_t best = 1;
    for (std::size_t len = 1; pos + len <= w.size(); ++len)
      if (is_lyndon(subword(w, pos, len))) best = len;
    fs.push_back(subword(w, pos, best));
    pos += best;
  }
  return fs;
}

// y_s <-> x0^(s-1) x1. X-words ending in x0 have no preimage.
inline std::optional<Word> transcode(const Word& w) {
  if (w.alph == Alphabet::Y) {
    Word out;
    out.alph = Alphabet::X;
    for (std::uint32_t s : w.a) {
      for (std::uint32_t i = 1; i < s; ++i) out.a.push_back(0);
      out.a.push_back(1);
    }
    return out;
  }
  Word out;
  out.alph = Alphabet::Y;
  std::uint32_t zeros = 0;
  for (std::uint32_t c : w.a) {
    if (c == 0) {
      ++zeros;
    } else {
      out.a.push_back(zeros + 1);
      zeros = 0;
    }
  }
  if (zeros > 0) return std::nullopt;
  return out;
}

// reverse + swap x0 <-> x1
inline Word hat_dual(const Word& w) {
  if (w.alph != Alphabet::X) throw std::invalid_argument("hat acts on X-words");
  Word out;
  out.alph = Alphabet::X;
  out.a.reserve(w.size());
  for (auto it = w.a.rbegin(); it != w.a.rend(); ++it) out.a.push_back(1 - *it);
  return out;
}

inline Word parse_word(const std::string& s, Alphabet eps_alph = Alphabet::X) {
  if (s.empty() || s == "eps") return Word{eps_alph, {}};
  Word w;
  std::size_t i = 0;
  if (s[0] == 'x')
    w.alph = Alphabet::X;
  else if (s[0] == 'y')
    w.alph = Alphabet::Y;
  else
    throw std::invalid_argument("word must start with x or y: '" + s + "'");
  while (i < s.size()) {
    if (s[i] != (w.alph == Alphabet::X ? 'x' : 'y'))
      throw std::invalid_argument("mixed alphabets in word: '" + s + "'");
    ++i;
    std::size_t j = i;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    if (j == i) throw std::invalid_argument("missing letter index in '" + s + "'");
    unsigned long v = std::stoul(s.substr(i, j - i));
    if (w.alph == Alphabet::X) {
      if (v > 1) throw std::invalid_argument("X letters are x0, x1");
      w.a.push_back(static_cast<std::uint32_t>(v));
    } else {
      if (v == 0) throw std::invalid_argument("Y letters start at y1");
      w.a.push_back(static_cast<std::uint32_t>(v));
    }
    i = j;
  }
  return w;
}

// Composition (r1,...,rk) <-> Y-word y_{r1}...y_{rk}.
inline Word word_from_composition(const std::vector<std::uint32_t>& comp) {
  return Word{Alphabet::Y, comp};
}

inline std::vector<std::uint32_t> composition_of(const Word& w) {
  if (w.alph != Alphabet::Y) throw std::invalid_argument("composition of a Y-word");
  return w.a;
}

}  // namespace mzv
