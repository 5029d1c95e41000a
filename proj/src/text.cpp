#include "viscom/text.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <unordered_set>

namespace viscom {

namespace {

using WordSet = std::unordered_set<std::string>;

const WordSet& function_words() {
  static const WordSet words = {
      "a",    "an",   "the",   "is",   "are",   "was",   "were", "be",    "been",
      "of",   "in",   "on",    "to",   "and",   "or",    "but",  "it",    "its",
      "this", "that", "these", "those", "with", "for",   "as",   "by",    "at",
      "from", "has",  "have",  "had",  "which", "who",   "can",  "will",  "not",
      "they", "their", "there", "when", "into", "than",  "also", "if",    "we",
      "he",   "she",  "you",   "i",    "do",    "does",  "did",  "would", "could"};
  return words;
}

const WordSet kToBe = {"am", "is", "are", "was", "were", "be", "been", "being"};
const WordSet kAux = {"will", "would", "shall", "should", "can",  "could", "may",
                      "might", "must", "do",    "does",   "did",  "have",  "has",
                      "had"};
const WordSet kConjunction = {"and",      "but",    "or",    "nor",   "yet",    "so",
                              "although", "because", "though", "whereas", "while"};
const WordSet kPronoun = {"i",    "me",     "my",       "mine",   "myself",   "you",
                          "your", "yours",  "yourself", "he",     "him",      "his",
                          "himself", "she", "her",      "hers",   "herself",  "it",
                          "its",  "itself", "we",       "us",     "our",      "ours",
                          "ourselves", "they", "them",  "their",  "theirs",
                          "themselves"};
const WordSet kPreposition = {
    "about",  "above",   "across", "after",      "against", "along",  "among",
    "around", "at",      "before", "behind",     "below",   "beneath", "beside",
    "between", "beyond", "by",     "down",       "during",  "except", "for",
    "from",   "in",      "inside", "into",       "near",    "of",     "off",
    "on",     "onto",    "out",    "outside",    "over",    "past",   "since",
    "through", "throughout", "to", "toward",     "towards", "under",  "until",
    "up",     "upon",    "with",   "within",     "without"};
const WordSet kInterrogative = {"what", "who", "whom", "whose", "which", "when", "where",
                                "why",  "how"};
const WordSet kArticle = {"a", "an", "the"};
const WordSet kSubordination = {"after",   "although", "as",     "because", "before",
                                "if",      "once",     "since",  "though",  "unless",
                                "until",   "when",     "whenever", "where", "whereas",
                                "wherever", "while"};
const WordSet kSentenceConjunction = {"and", "but", "or", "nor", "yet", "so"};
const char* const kNominalSuffixes[] = {"tion", "sion", "ment", "ness",
                                        "ity",  "ance", "ence", "ism"};

const std::map<std::string, int, std::less<>>& syllable_exceptions() {
  static const std::map<std::string, int, std::less<>> m = {
      {"area", 3},   {"idea", 3},     {"being", 2},   {"create", 2},
      {"created", 3}, {"science", 2}, {"people", 2},  {"every", 2},
      {"everyone", 3}, {"business", 2}, {"quiet", 2}, {"poem", 2},
  };
  return m;
}

bool is_word_byte(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f';
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::size_t code_points(std::string_view s) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return (c & 0xC0) != 0x80; }));
}

std::string collapse(std::string_view s) {
  std::string out;
  bool pending = false;
  for (char c : s) {
    if (is_space(static_cast<unsigned char>(c))) {
      pending = !out.empty();
    } else {
      if (pending) out += ' ';
      pending = false;
      out += c;
    }
  }
  return out;
}

bool is_skipped_subtree(const std::string& tag) {
  static const std::set<std::string> kSkip = {
      "nav",    "header", "footer",   "aside", "form",   "script", "style",
      "noscript", "template", "button", "select", "textarea", "svg", "math",
      "iframe", "object"};
  return kSkip.count(tag) > 0;
}

bool is_block(const std::string& tag) {
  static const std::set<std::string> kBlock = {
      "address", "article", "blockquote", "body",   "caption", "dd",   "details",
      "dialog",  "div",     "dl",         "dt",     "fieldset", "figcaption",
      "figure",  "h1",      "h2",         "h3",     "h4",      "h5",   "h6",
      "hgroup",  "hr",      "li",         "main",   "ol",      "p",    "pre",
      "section", "summary", "table",      "tbody",  "td",      "tfoot", "th",
      "thead",   "tr",      "ul",         "br"};
  return kBlock.count(tag) > 0;
}

void gather(const DomNode& n, std::string& run, std::vector<std::string>& out) {
  auto flush = [&] {
    std::string p = collapse(run);
    if (!p.empty()) out.push_back(std::move(p));
    run.clear();
  };
  for (const DomNode& c : n.children) {
    if (c.is_text()) {
      run += c.text;
      continue;
    }
    if (is_skipped_subtree(c.tag)) {
      run += ' ';
      continue;
    }
    if (is_block(c.tag)) {
      flush();
      gather(c, run, out);
      flush();
    } else {
      gather(c, run, out);
    }
  }
}

bool ends_sentence(std::string_view p) {
  std::size_t i = p.size();
  while (i > 0 && std::string_view("\"')]}").find(p[i - 1]) != std::string_view::npos) --i;
  // Typographic closing quotes.
  while (i >= 3 && (p.substr(i - 3, 3) == "\xE2\x80\x9D" || p.substr(i - 3, 3) == "\xE2\x80\x99")) {
    i -= 3;
  }
  return i > 0 && (p[i - 1] == '.' || p[i - 1] == '!' || p[i - 1] == '?');
}

bool is_vowel(char c, bool first) {
  switch (c) {
    case 'a':
    case 'e':
    case 'i':
    case 'o':
    case 'u':
      return true;
    case 'y':
      return !first;
    default:
      return false;
  }
}

double safe_div(double a, double b) { return b > 0.0 ? a / b : 0.0; }

}  // namespace

bool is_prose(std::string_view paragraph) {
  std::size_t tokens = 0;
  bool function_word = false;
  std::size_t i = 0;
  while (i < paragraph.size()) {
    while (i < paragraph.size() && is_space(static_cast<unsigned char>(paragraph[i]))) ++i;
    if (i >= paragraph.size()) break;
    const std::size_t start = i;
    while (i < paragraph.size() && !is_space(static_cast<unsigned char>(paragraph[i]))) ++i;
    ++tokens;
    for (const std::string& w : words_of(paragraph.substr(start, i - start))) {
      if (function_words().count(lower(w))) function_word = true;
    }
  }
  return tokens >= 5 && ends_sentence(paragraph) && function_word;
}

MainText extract_main_text(const DomNode& document) {
  std::vector<std::string> candidates;
  std::string run;
  gather(body_of(document), run, candidates);
  std::string tail = collapse(run);
  if (!tail.empty()) candidates.push_back(std::move(tail));
  MainText out;
  for (std::string& c : candidates) {
    if (is_prose(c)) out.paragraphs.push_back(std::move(c));
  }
  return out;
}

std::vector<std::string> words_of(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_word_byte(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::string w;
    while (i < text.size()) {
      const auto c = static_cast<unsigned char>(text[i]);
      if (is_word_byte(c)) {
        w += text[i++];
      } else if ((c == '\'' || c == '-') && i + 1 < text.size() &&
                 is_word_byte(static_cast<unsigned char>(text[i + 1]))) {
        w += text[i++];
      } else {
        break;
      }
    }
    out.push_back(std::move(w));
  }
  return out;
}

std::vector<std::string> sentences_of(std::string_view paragraph) {
  std::vector<std::string> out;
  std::string current;
  auto flush = [&] {
    std::string s = collapse(current);
    current.clear();
    if (!words_of(s).empty()) out.push_back(std::move(s));
  };
  for (std::size_t i = 0; i < paragraph.size(); ++i) {
    const char c = paragraph[i];
    current += c;
    if (c == '.' || c == '!' || c == '?') {
      while (i + 1 < paragraph.size() &&
             (paragraph[i + 1] == '.' || paragraph[i + 1] == '!' || paragraph[i + 1] == '?' ||
              paragraph[i + 1] == '"' || paragraph[i + 1] == '\'' || paragraph[i + 1] == ')')) {
        current += paragraph[++i];
      }
      if (i + 1 == paragraph.size() || is_space(static_cast<unsigned char>(paragraph[i + 1]))) {
        flush();
      }
    }
  }
  flush();
  return out;
}

int count_syllables(std::string_view word) {
  std::string w;
  for (char c : word) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      w += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  if (w.empty()) return 1;
  if (auto it = syllable_exceptions().find(w); it != syllable_exceptions().end()) {
    return it->second;
  }
  int groups = 0;
  bool in_group = false;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const bool v = is_vowel(w[i], i == 0);
    if (v && !in_group) ++groups;
    in_group = v;
  }
  const std::size_t n = w.size();
  if (groups > 1 && w[n - 1] == 'e') {
    const bool consonant_le = n >= 3 && w[n - 2] == 'l' && !is_vowel(w[n - 3], n == 3);
    if (!consonant_le) --groups;
  }
  return std::max(groups, 1);
}

FeatureVector texcom_features(const MainText& text) {
  double characters = 0, syllables = 0, words = 0, sentences = 0, long_words = 0,
         complex_words = 0;
  double tobe = 0, aux = 0, conj = 0, pron = 0, prep = 0, nominal = 0;
  double b_pron = 0, b_inter = 0, b_art = 0, b_sub = 0, b_conj = 0, b_prep = 0;
  double min_len = 0, max_len = 0;
  std::set<std::string> types;

  for (const std::string& paragraph : text.paragraphs) {
    for (const std::string& sentence : sentences_of(paragraph)) {
      const auto ws = words_of(sentence);
      const double len = static_cast<double>(ws.size());
      min_len = sentences == 0 ? len : std::min(min_len, len);
      max_len = std::max(max_len, len);
      ++sentences;
      for (std::size_t i = 0; i < ws.size(); ++i) {
        const std::string lw = lower(ws[i]);
        const double chars = static_cast<double>(code_points(ws[i]));
        const int syl = count_syllables(ws[i]);
        ++words;
        characters += chars;
        syllables += syl;
        if (chars >= 7) ++long_words;
        if (syl >= 3) ++complex_words;
        types.insert(lw);
        tobe += kToBe.count(lw);
        aux += kAux.count(lw);
        conj += kConjunction.count(lw);
        pron += kPronoun.count(lw);
        prep += kPreposition.count(lw);
        if (lw.size() > 6) {
          for (const char* suffix : kNominalSuffixes) {
            const std::string_view sv(suffix);
            if (lw.compare(lw.size() - sv.size(), sv.size(), sv) == 0) {
              ++nominal;
              break;
            }
          }
        }
        if (i == 0) {
          b_pron += kPronoun.count(lw);
          b_inter += kInterrogative.count(lw);
          b_art += kArticle.count(lw);
          b_sub += kSubordination.count(lw);
          b_conj += kSentenceConjunction.count(lw);
          b_prep += kPreposition.count(lw);
        }
      }
    }
  }

  std::vector<double> v(registry::kTexComCount, 0.0);
  if (words > 0 && sentences > 0) {
    const double wps = words / sentences;
    const double spw = syllables / words;
    v[0] = 206.835 - 1.015 * wps - 84.6 * spw;
    v[1] = 0.39 * wps + 11.8 * spw - 15.59;
    v[2] = 4.71 * (characters / words) + 0.5 * wps - 21.43;
    v[3] = 0.0588 * (100.0 * characters / words) - 0.296 * (100.0 * sentences / words) - 15.8;
    v[4] = 0.4 * (wps + 100.0 * complex_words / words);
    v[5] = wps + 100.0 * long_words / words;
    v[6] = 1.0430 * std::sqrt(complex_words * 30.0 / sentences) + 3.1291;
  }
  v[7] = characters;
  v[8] = syllables;
  v[9] = words;
  v[10] = sentences;
  v[11] = static_cast<double>(text.paragraphs.size());
  v[12] = safe_div(characters, words);
  v[13] = safe_div(words, sentences);
  v[14] = safe_div(characters, sentences);
  v[15] = long_words;
  v[16] = complex_words;
  v[17] = safe_div(static_cast<double>(types.size()), words);
  v[18] = min_len;
  v[19] = max_len;
  const double rest[] = {tobe, aux, conj, pron, prep, nominal,
                         b_pron, b_inter, b_art, b_sub, b_conj, b_prep};
  std::copy(std::begin(rest), std::end(rest), v.begin() + 20);
  return FeatureVector(registry::texcom(), std::move(v));
}

}  // namespace viscom
