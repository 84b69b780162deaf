#include <algorithm>
#include <array>
#include <cctype>
#include <string>
#include <string_view>

#include "tarkit/textprep.hpp"

// Porter's 1980 suffix-stripping algorithm, original rule tables. Operates on
// lowercase ASCII words; anything containing a non-letter passes through.

namespace tarkit {
namespace {

bool is_vowel(const std::string& w, std::size_t i) {
  switch (w[i]) {
    case 'a': case 'e': case 'i': case 'o': case 'u':
      return true;
    case 'y':
      // y is a vowel when it follows a consonant
      return i > 0 && !is_vowel(w, i - 1);
    default:
      return false;
  }
}

// m in [C](VC)^m[V]: the number of vowel-consonant sequences in w[0..len).
int measure(const std::string& w, std::size_t len) {
  int m = 0;
  std::size_t i = 0;
  while (i < len && !is_vowel(w, i)) ++i;
  while (i < len) {
    while (i < len && is_vowel(w, i)) ++i;
    if (i == len) break;
    ++m;
    while (i < len && !is_vowel(w, i)) ++i;
  }
  return m;
}

bool contains_vowel(const std::string& w, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i)
    if (is_vowel(w, i)) return true;
  return false;
}

bool double_consonant(const std::string& w) {
  std::size_t n = w.size();
  if (n < 2 || w[n - 1] != w[n - 2]) return false;
  return !is_vowel(w, n - 1);
}

// consonant-vowel-consonant where the final consonant is not w, x or y.
bool ends_cvc(const std::string& w, std::size_t len) {
  if (len < 3) return false;
  if (is_vowel(w, len - 1) || !is_vowel(w, len - 2) || is_vowel(w, len - 3)) return false;
  char c = w[len - 1];
  return c != 'w' && c != 'x' && c != 'y';
}

bool ends_with(const std::string& w, std::string_view suffix) {
  return w.size() >= suffix.size() &&
         std::equal(suffix.rbegin(), suffix.rend(), w.rbegin());
}

// Replace `suffix` with `repl` when the remaining stem has measure > threshold.
bool replace_if_m(std::string& w, std::string_view suffix, std::string_view repl,
                  int threshold) {
  if (!ends_with(w, suffix)) return false;
  std::size_t stem_len = w.size() - suffix.size();
  if (measure(w, stem_len) > threshold) {
    w.resize(stem_len);
    w.append(repl);
  }
  return true;  // suffix matched, stop scanning the rule table
}

void step1a(std::string& w) {
  if (!ends_with(w, "s")) return;
  if (ends_with(w, "sses") || ends_with(w, "ies")) {
    w.resize(w.size() - 2);
  } else if (!ends_with(w, "ss")) {
    w.resize(w.size() - 1);
  }
}

void step1b(std::string& w) {
  if (ends_with(w, "eed")) {
    if (measure(w, w.size() - 3) > 0) w.resize(w.size() - 1);
    return;
  }
  std::size_t stem_len = 0;
  if (ends_with(w, "ed") && contains_vowel(w, w.size() - 2)) {
    stem_len = w.size() - 2;
  } else if (ends_with(w, "ing") && contains_vowel(w, w.size() - 3)) {
    stem_len = w.size() - 3;
  } else {
    return;
  }
  w.resize(stem_len);
  if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
    w.push_back('e');
  } else if (double_consonant(w) && !ends_with(w, "l") && !ends_with(w, "s") &&
             !ends_with(w, "z")) {
    w.resize(w.size() - 1);
  } else if (measure(w, w.size()) == 1 && ends_cvc(w, w.size())) {
    w.push_back('e');
  }
}

void step1c(std::string& w) {
  if (ends_with(w, "y") && contains_vowel(w, w.size() - 1)) w.back() = 'i';
}

struct Rule {
  std::string_view suffix;
  std::string_view replacement;
};

constexpr std::array<Rule, 20> kStep2Rules{{
    {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"}, {"anci", "ance"},
    {"izer", "ize"},    {"abli", "able"},   {"alli", "al"},   {"entli", "ent"},
    {"eli", "e"},       {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
    {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"}, {"fulness", "ful"},
    {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},   {"biliti", "ble"},
}};

constexpr std::array<Rule, 7> kStep3Rules{{
    {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
    {"ical", "ic"},  {"ful", ""},   {"ness", ""},
}};

constexpr std::array<std::string_view, 18> kStep4Suffixes{{
    "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement",
    "ment", "ent", "ou", "ism", "ate", "iti", "ous", "ive", "ize",
}};

void step2(std::string& w) {
  for (const Rule& r : kStep2Rules)
    if (replace_if_m(w, r.suffix, r.replacement, 0)) return;
}

void step3(std::string& w) {
  for (const Rule& r : kStep3Rules)
    if (replace_if_m(w, r.suffix, r.replacement, 0)) return;
}

void step4(std::string& w) {
  // "ion" is deleted only after s or t; check it in length order with ement/ment/ent.
  for (std::string_view suffix : kStep4Suffixes) {
    if (suffix == "ent" && ends_with(w, "ion")) {
      std::size_t stem_len = w.size() - 3;
      if (stem_len > 0 && (w[stem_len - 1] == 's' || w[stem_len - 1] == 't') &&
          measure(w, stem_len) > 1) {
        w.resize(stem_len);
        return;
      }
    }
    if (!ends_with(w, suffix)) continue;
    std::size_t stem_len = w.size() - suffix.size();
    if (measure(w, stem_len) > 1) w.resize(stem_len);
    return;
  }
}

void step5a(std::string& w) {
  if (!ends_with(w, "e")) return;
  int m = measure(w, w.size() - 1);
  if (m > 1 || (m == 1 && !ends_cvc(w, w.size() - 1))) w.resize(w.size() - 1);
}

void step5b(std::string& w) {
  if (ends_with(w, "ll") && measure(w, w.size()) > 1) w.resize(w.size() - 1);
}

}  // namespace

std::string porter_stem(std::string_view token) {
  std::string w(token);
  if (w.size() <= 2) return w;
  for (char c : w)
    if (c < 'a' || c > 'z') return w;

  step1a(w);
  step1b(w);
  step1c(w);
  step2(w);
  step3(w);
  step4(w);
  step5a(w);
  step5b(w);
  return w;
}

}  // namespace tarkit
