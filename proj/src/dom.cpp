#include "viscom/dom.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <optional>
#include <sstream>

namespace viscom {

namespace {

template <std::size_t N>
bool one_of(std::string_view tag, const std::string_view (&set)[N]) {
  return std::find(std::begin(set), std::end(set), tag) != std::end(set);
}

constexpr std::string_view kVoid[] = {
    "area", "base", "br", "col", "embed", "hr", "img", "input",
    "link", "meta", "param", "source", "track", "wbr"};

constexpr std::string_view kRawText[] = {
    "script", "style", "xmp", "iframe", "noembed", "noframes"};

constexpr std::string_view kRcData[] = {"textarea", "title"};

constexpr std::string_view kHeadContent[] = {
    "title", "meta", "link", "base", "style", "script", "noscript", "template"};

// Start tags that close an open <p> in button scope.
constexpr std::string_view kClosesP[] = {
    "address", "article", "aside", "blockquote", "center", "details", "dialog",
    "dir", "div", "dl", "fieldset", "figcaption", "figure", "footer", "header",
    "hgroup", "main", "menu", "nav", "ol", "p", "section", "summary", "ul",
    "h1", "h2", "h3", "h4", "h5", "h6", "pre", "listing", "form", "table", "hr",
    "xmp", "dd"};

constexpr std::string_view kHeadings[] = {"h1", "h2", "h3",
                                                       "h4", "h5", "h6"};

constexpr std::string_view kDefaultScope[] = {
    "applet", "caption", "html", "table", "td", "th", "marquee", "object",
    "template"};

constexpr std::string_view kSpecial[] = {
    "address", "applet", "area", "article", "aside", "base", "basefont",
    "bgsound", "blockquote", "body", "br", "button", "caption", "center", "col",
    "colgroup", "dd", "details", "dir", "div", "dl", "dt", "embed", "fieldset",
    "figcaption", "figure", "footer", "form", "frame", "frameset", "h1", "h2",
    "h3", "h4", "h5", "h6", "head", "header", "hgroup", "hr", "html", "iframe",
    "img", "input", "keygen", "li", "link", "listing", "main", "marquee",
    "menu", "meta", "nav", "noembed", "noframes", "noscript", "object", "ol",
    "p", "param", "plaintext", "pre", "script", "section", "select", "source",
    "style", "summary", "table", "tbody", "td", "template", "textarea", "tfoot",
    "th", "thead", "title", "tr", "track", "ul"};

// ---------------------------------------------------------------------------
// Input decoding

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF) || cp == 0) cp = 0xFFFD;
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

std::string sanitize_utf8(std::string_view in) {
  std::string out;
  out.reserve(in.size());
  std::size_t i = 0;
  while (i < in.size()) {
    const auto c = static_cast<unsigned char>(in[i]);
    std::size_t len = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      len = 1;
      cp = c;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    }
    bool ok = len > 0 && i + len <= in.size();
    for (std::size_t k = 1; ok && k < len; ++k) {
      const auto cc = static_cast<unsigned char>(in[i + k]);
      if ((cc & 0xC0) != 0x80) ok = false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (ok) {
      const bool overlong = (len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
                            (len == 4 && cp < 0x10000);
      if (overlong || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) ok = false;
    }
    if (!ok) {
      append_utf8(out, 0xFFFD);
      ++i;
      continue;
    }
    if (cp == '\r') {
      // CRLF and lone CR normalize to LF.
      out += '\n';
      if (i + 1 < in.size() && in[i + 1] == '\n') ++i;
    } else {
      out.append(in.substr(i, len));
    }
    i += len;
  }
  return out;
}

struct NamedEntity {
  std::string_view name;
  std::uint32_t cp;
};

constexpr NamedEntity kEntities[] = {
    {"amp", '&'},       {"lt", '<'},         {"gt", '>'},
    {"quot", '"'},      {"apos", '\''},      {"nbsp", 0xA0},
    {"copy", 0xA9},     {"reg", 0xAE},       {"mdash", 0x2014},
    {"ndash", 0x2013},  {"hellip", 0x2026},  {"lsquo", 0x2018},
    {"rsquo", 0x2019},  {"ldquo", 0x201C},   {"rdquo", 0x201D},
    {"middot", 0xB7},   {"bull", 0x2022},    {"euro", 0x20AC},
    {"trade", 0x2122},  {"deg", 0xB0},       {"times", 0xD7},
    {"laquo", 0xAB},    {"raquo", 0xBB},     {"shy", 0xAD},
};

std::string decode_entities(std::string_view in) {
  std::string out;
  out.reserve(in.size());
  std::size_t i = 0;
  while (i < in.size()) {
    if (in[i] != '&') {
      out += in[i++];
      continue;
    }
    std::size_t j = i + 1;
    if (j < in.size() && in[j] == '#') {
      ++j;
      const bool hex = j < in.size() && (in[j] == 'x' || in[j] == 'X');
      if (hex) ++j;
      const std::size_t digits_start = j;
      std::uint32_t cp = 0;
      while (j < in.size() && (hex ? std::isxdigit(static_cast<unsigned char>(in[j]))
                                   : std::isdigit(static_cast<unsigned char>(in[j])))) {
        const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(in[j])));
        const std::uint32_t d = std::isdigit(static_cast<unsigned char>(c))
                                    ? static_cast<std::uint32_t>(c - '0')
                                    : static_cast<std::uint32_t>(c - 'a' + 10);
        cp = std::min<std::uint32_t>(cp * (hex ? 16 : 10) + d, 0x110000);
        ++j;
      }
      if (j == digits_start) {
        out += in[i++];
        continue;
      }
      if (j < in.size() && in[j] == ';') ++j;
      append_utf8(out, cp);
      i = j;
      continue;
    }
    bool matched = false;
    for (const NamedEntity& e : kEntities) {
      if (in.substr(j, e.name.size()) == e.name) {
        std::size_t end = j + e.name.size();
        if (end < in.size() && in[end] == ';') {
          ++end;
        } else if (end < in.size() && std::isalnum(static_cast<unsigned char>(in[end]))) {
          continue;
        }
        append_utf8(out, e.cp);
        i = end;
        matched = true;
        break;
      }
    }
    if (!matched) out += in[i++];
  }
  return out;
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\f' || c == '\r';
}

bool all_space(std::string_view s) {
  return std::all_of(s.begin(), s.end(), is_space);
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// ---------------------------------------------------------------------------
// Tokenizer

struct Token {
  enum class Kind { kStart, kEnd, kText } kind = Kind::kText;
  std::string name;
  std::vector<std::pair<std::string, std::string>> attrs;
  bool self_closing = false;
  std::string text;
};

class Tokenizer {
 public:
  explicit Tokenizer(std::string_view src) : src_(src) {}

  std::optional<Token> next() {
    if (!pending_raw_.empty()) return raw_text();
    while (pos_ < src_.size()) {
      if (src_[pos_] != '<') return text();
      if (auto t = markup()) return t;
    }
    return std::nullopt;
  }

 private:
  Token text() {
    const std::size_t start = pos_;
    std::size_t end = pos_ + 1;
    while (end < src_.size()) {
      end = src_.find('<', end);
      if (end == std::string_view::npos) {
        end = src_.size();
        break;
      }
      if (starts_markup(end)) break;
      ++end;
    }
    pos_ = end;
    Token t;
    t.text = decode_entities(src_.substr(start, end - start));
    return t;
  }

  bool starts_markup(std::size_t at) const {
    if (at + 1 >= src_.size()) return false;
    const char c = src_[at + 1];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '!' || c == '?') return true;
    return c == '/' && at + 2 < src_.size();
  }

  // Consumes one markup construct. Returns a token for tags, nullopt for
  // comments/doctypes and for a '<' that turned out to be text.
  std::optional<Token> markup() {
    if (!starts_markup(pos_)) {
      Token t;
      t.text = "<";
      ++pos_;
      return t;
    }
    const char c = src_[pos_ + 1];
    if (src_.substr(pos_, 4) == "<!--") {
      const std::size_t end = src_.find("-->", pos_ + 4);
      pos_ = end == std::string_view::npos ? src_.size() : end + 3;
      return std::nullopt;
    }
    if (c == '!' || c == '?') {
      const std::size_t end = src_.find('>', pos_);
      pos_ = end == std::string_view::npos ? src_.size() : end + 1;
      return std::nullopt;
    }
    if (c == '/') {
      if (!std::isalpha(static_cast<unsigned char>(src_[pos_ + 2]))) {
        // "</>" is dropped, "</ ..." is a bogus comment.
        const std::size_t end = src_.find('>', pos_);
        pos_ = end == std::string_view::npos ? src_.size() : end + 1;
        return std::nullopt;
      }
      pos_ += 2;
      Token t;
      t.kind = Token::Kind::kEnd;
      t.name = read_name();
      const std::size_t end = src_.find('>', pos_);
      pos_ = end == std::string_view::npos ? src_.size() : end + 1;
      return t;
    }
    ++pos_;
    Token t;
    t.kind = Token::Kind::kStart;
    t.name = read_name();
    read_attributes(t);
    if (one_of(t.name, kRawText)) {
      pending_raw_ = t.name;
      raw_decode_ = false;
    } else if (one_of(t.name, kRcData)) {
      pending_raw_ = t.name;
      raw_decode_ = true;
    }
    return t;
  }

  std::string read_name() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && !is_space(src_[pos_]) && src_[pos_] != '/' &&
           src_[pos_] != '>') {
      ++pos_;
    }
    return lower(src_.substr(start, pos_ - start));
  }

  void read_attributes(Token& t) {
    while (pos_ < src_.size()) {
      while (pos_ < src_.size() && is_space(src_[pos_])) ++pos_;
      if (pos_ >= src_.size()) return;
      if (src_[pos_] == '>') {
        ++pos_;
        return;
      }
      if (src_[pos_] == '/') {
        ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '>') {
          t.self_closing = true;
          ++pos_;
          return;
        }
        continue;
      }
      const std::size_t name_start = pos_;
      ++pos_;  // an attribute name may start with '='
      while (pos_ < src_.size() && !is_space(src_[pos_]) && src_[pos_] != '/' &&
             src_[pos_] != '>' && src_[pos_] != '=') {
        ++pos_;
      }
      std::string name = lower(src_.substr(name_start, pos_ - name_start));
      std::string value;
      std::size_t look = pos_;
      while (look < src_.size() && is_space(src_[look])) ++look;
      if (look < src_.size() && src_[look] == '=') {
        pos_ = look + 1;
        while (pos_ < src_.size() && is_space(src_[pos_])) ++pos_;
        if (pos_ < src_.size() && (src_[pos_] == '"' || src_[pos_] == '\'')) {
          const char quote = src_[pos_++];
          const std::size_t end = src_.find(quote, pos_);
          const std::size_t stop = end == std::string_view::npos ? src_.size() : end;
          value = decode_entities(src_.substr(pos_, stop - pos_));
          pos_ = end == std::string_view::npos ? src_.size() : end + 1;
        } else {
          const std::size_t start = pos_;
          while (pos_ < src_.size() && !is_space(src_[pos_]) && src_[pos_] != '>') ++pos_;
          value = decode_entities(src_.substr(start, pos_ - start));
        }
      }
      const bool duplicate =
          std::any_of(t.attrs.begin(), t.attrs.end(),
                      [&](const auto& a) { return a.first == name; });
      if (!duplicate) t.attrs.emplace_back(std::move(name), std::move(value));
    }
  }

  Token raw_text() {
    const std::string name = std::move(pending_raw_);
    pending_raw_.clear();
    std::size_t end = pos_;
    while (true) {
      end = src_.find("</", end);
      if (end == std::string_view::npos) {
        end = src_.size();
        break;
      }
      const std::string candidate = lower(src_.substr(end + 2, name.size()));
      const std::size_t after = end + 2 + name.size();
      if (candidate == name &&
          (after >= src_.size() || is_space(src_[after]) || src_[after] == '>' ||
           src_[after] == '/')) {
        break;
      }
      end += 2;
    }
    Token t;
    const std::string_view body = src_.substr(pos_, end - pos_);
    t.text = raw_decode_ ? decode_entities(body) : std::string(body);
    pos_ = end;
    return t;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::string pending_raw_;
  bool raw_decode_ = false;
};

// ---------------------------------------------------------------------------
// Tree construction over an index arena.

struct Slot {
  std::string tag;
  std::string text;
  std::map<std::string, std::string> attrs;
  std::vector<int> children;
};

class TreeBuilder {
 public:
  TreeBuilder() {
    html_ = add("html");
  }

  void feed(Token& t) {
    switch (t.kind) {
      case Token::Kind::kText:
        on_text(t.text);
        break;
      case Token::Kind::kStart:
        on_start(t);
        break;
      case Token::Kind::kEnd:
        on_end(t.name);
        break;
    }
  }

  DomNode finish() {
    ensure_head();
    ensure_body();
    return materialize(html_);
  }

 private:
  int add(std::string tag) {
    slots_.push_back(Slot{std::move(tag), {}, {}, {}});
    return static_cast<int>(slots_.size()) - 1;
  }

  const std::string& tag(int i) const { return slots_[static_cast<std::size_t>(i)].tag; }
  Slot& slot(int i) { return slots_[static_cast<std::size_t>(i)]; }
  int current() const { return stack_.empty() ? html_ : stack_.back(); }

  void ensure_head() {
    if (head_ >= 0) return;
    head_ = add("head");
    slot(html_).children.push_back(head_);
  }

  void ensure_body() {
    if (body_ >= 0) return;
    ensure_head();
    body_ = add("body");
    slot(html_).children.push_back(body_);
    stack_ = {body_};
    in_head_ = false;
  }

  void insert_text(int parent, const std::string& text) {
    auto& kids = slot(parent).children;
    if (!kids.empty() && tag(kids.back()) == "#text") {
      slot(kids.back()).text += text;
      return;
    }
    const int n = add("#text");
    slot(n).text = text;
    slot(parent).children.push_back(n);
  }

  void on_text(const std::string& text) {
    if (text.empty()) return;
    if (body_ < 0) {
      if (in_head_ && head_ >= 0 && head_text_target_ >= 0) {
        insert_text(head_text_target_, text);
        return;
      }
      const auto first = std::find_if_not(text.begin(), text.end(), is_space);
      if (first == text.end()) return;
      ensure_body();
      insert_text(current(), std::string(first, text.end()));
      return;
    }
    insert_text(current(), text);
  }

  int insert_element(const Token& t, int parent) {
    const int n = add(t.name);
    for (const auto& [k, v] : t.attrs) slot(n).attrs.emplace(k, v);
    slot(parent).children.push_back(n);
    return n;
  }

  void merge_attrs(int target, const Token& t) {
    for (const auto& [k, v] : t.attrs) slot(target).attrs.emplace(k, v);
  }

  bool in_scope(std::string_view name, std::initializer_list<std::string_view> extra) const {
    for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) {
      const std::string& t = tag(*it);
      if (t == name) return true;
      if (one_of(t, kDefaultScope)) return false;
      if (std::find(extra.begin(), extra.end(), t) != extra.end()) return false;
    }
    return false;
  }

  bool in_table_scope(std::string_view name) const {
    for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) {
      const std::string& t = tag(*it);
      if (t == name) return true;
      if (t == "html" || t == "table" || t == "template") return false;
    }
    return false;
  }

  void pop_until(std::string_view name) {
    while (stack_.size() > 1) {
      const bool hit = tag(stack_.back()) == name;
      stack_.pop_back();
      if (hit) return;
    }
  }

  void close_p_in_button_scope() {
    if (in_scope("p", {"button"})) pop_until("p");
  }

  void close_list_item(std::initializer_list<std::string_view> names) {
    for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) {
      const std::string& t = tag(*it);
      if (std::find(names.begin(), names.end(), t) != names.end()) {
        pop_until(t);
        return;
      }
      if (one_of(t, kSpecial) && t != "address" && t != "div" && t != "p") return;
    }
  }

  void close_cell() {
    for (std::string_view cell : {"td", "th"}) {
      if (in_table_scope(cell)) {
        pop_until(cell);
        return;
      }
    }
  }

  void close_to_table_context(std::initializer_list<std::string_view> stop) {
    while (stack_.size() > 1) {
      const std::string& t = tag(stack_.back());
      if (t == "table" || std::find(stop.begin(), stop.end(), t) != stop.end()) return;
      stack_.pop_back();
    }
  }

  bool table_open() const { return in_table_scope("table"); }

  void push_synthetic(std::string name) {
    Token t;
    t.name = std::move(name);
    stack_.push_back(insert_element(t, current()));
  }

  void on_start(const Token& t) {
    const std::string& name = t.name;
    if (name == "html") {
      merge_attrs(html_, t);
      return;
    }
    if (body_ < 0) {
      if (name == "head") {
        if (head_ < 0) {
          head_ = add("head");
          merge_attrs(head_, t);
          slot(html_).children.push_back(head_);
          in_head_ = true;
        }
        return;
      }
      if (one_of(name, kHeadContent)) {
        ensure_head();
        const int n = insert_element(t, head_);
        head_text_target_ = (one_of(name, kRawText) || one_of(name, kRcData)) ? n : -1;
        in_head_ = true;
        return;
      }
      if (name == "body") {
        ensure_body();
        merge_attrs(body_, t);
        return;
      }
      ensure_body();
    } else if (name == "body") {
      merge_attrs(body_, t);
      return;
    } else if (name == "head") {
      return;
    }
    head_text_target_ = -1;

    if (one_of(name, kClosesP)) close_p_in_button_scope();
    if (one_of(name, kHeadings) && one_of(tag(current()), kHeadings)) stack_.pop_back();
    if (name == "li") {
      close_list_item({"li"});
    } else if (name == "dt" || name == "dd") {
      close_list_item({"dt", "dd"});
      if (name == "dt") close_p_in_button_scope();
    } else if (name == "option" && tag(current()) == "option") {
      stack_.pop_back();
    } else if (name == "optgroup") {
      if (tag(current()) == "option") stack_.pop_back();
      if (tag(current()) == "optgroup") stack_.pop_back();
    } else if (name == "a") {
      for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) {
        if (tag(*it) == "a") {
          pop_until("a");
          break;
        }
      }
    } else if (table_open() && (name == "tbody" || name == "thead" || name == "tfoot")) {
      close_to_table_context({});
    } else if (table_open() && name == "tr") {
      close_cell();
      close_to_table_context({"tbody", "thead", "tfoot"});
      if (tag(current()) == "table") push_synthetic("tbody");
    } else if (table_open() && (name == "td" || name == "th")) {
      close_cell();
      close_to_table_context({"tbody", "thead", "tfoot", "tr"});
      if (tag(current()) == "table") push_synthetic("tbody");
      if (tag(current()) != "tr") push_synthetic("tr");
    }

    const int n = insert_element(t, current());
    const bool foreign = in_foreign_ || name == "svg" || name == "math";
    if (is_void_element(name) || (foreign && t.self_closing)) return;
    stack_.push_back(n);
    if (name == "svg" || name == "math") in_foreign_ = true;
  }

  void on_end(const std::string& name) {
    if (body_ < 0) {
      if (name == "head" || one_of(name, kHeadContent)) {
        head_text_target_ = -1;
        return;
      }
      if (name != "br") return;
      ensure_body();
    }
    if (name == "body" || name == "html" || name == "head") return;
    if (name == "br") {
      Token t;
      t.name = "br";
      insert_element(t, current());
      return;
    }
    if (name == "p") {
      if (!in_scope("p", {"button"})) {
        Token t;
        t.name = "p";
        insert_element(t, current());
        return;
      }
      pop_until("p");
      return;
    }
    if (name == "li") {
      if (in_scope("li", {"ol", "ul"})) pop_until("li");
      return;
    }
    if (one_of(name, kHeadings)) {
      bool open = false;
      for (std::string_view h : kHeadings) open = open || in_scope(h, {});
      if (!open) return;
      while (stack_.size() > 1) {
        const bool hit = one_of(tag(stack_.back()), kHeadings);
        stack_.pop_back();
        if (hit) break;
      }
      return;
    }
    if (name == "svg" || name == "math") in_foreign_ = false;
    if (one_of(name, kSpecial) && !in_foreign_) {
      const bool table_part = name == "table" || name == "tbody" || name == "thead" ||
                              name == "tfoot" || name == "tr" || name == "td" ||
                              name == "th";
      if (table_part ? !in_table_scope(name) : !in_scope(name, {})) return;
      pop_until(name);
      return;
    }
    for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) {
      const std::string& t = tag(*it);
      if (t == name) {
        pop_until(name);
        return;
      }
      if (one_of(t, kSpecial)) return;
    }
  }

  DomNode materialize(int i) const {
    const Slot& s = slots_[static_cast<std::size_t>(i)];
    DomNode n;
    n.tag = s.tag;
    n.text = s.text;
    n.attrs = s.attrs;
    n.children.reserve(s.children.size());
    for (int c : s.children) n.children.push_back(materialize(c));
    return n;
  }

  std::vector<Slot> slots_;
  std::vector<int> stack_;
  int html_ = -1;
  int head_ = -1;
  int body_ = -1;
  int head_text_target_ = -1;
  bool in_head_ = false;
  bool in_foreign_ = false;
};

void dump(const DomNode& n, int depth, std::ostringstream& out) {
  const std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
  if (n.is_text()) {
    if (all_space(n.text)) return;
    out << "| " << indent << '"' << n.text << "\"\n";
    return;
  }
  out << "| " << indent << '<' << n.tag << ">\n";
  for (const auto& [k, v] : n.attrs) {
    out << "| " << indent << "  " << k << "=\"" << v << "\"\n";
  }
  for (const DomNode& c : n.children) dump(c, depth + 1, out);
}

void collect_text(const DomNode& n, std::string& out) {
  if (n.is_text()) {
    out += n.text;
    out += ' ';
    return;
  }
  if (n.tag == "script" || n.tag == "style") return;
  for (const DomNode& c : n.children) collect_text(c, out);
}

}  // namespace

bool is_void_element(std::string_view tag) { return one_of(tag, kVoid); }

const DomNode* DomNode::find(std::string_view name) const {
  if (tag == name) return this;
  for (const DomNode& c : children) {
    if (const DomNode* hit = c.find(name)) return hit;
  }
  return nullptr;
}

DomNode parse_dom(std::string_view html) {
  if (html.empty()) throw EmptyDocument();
  const std::string src = sanitize_utf8(html);
  Tokenizer tokenizer(src);
  TreeBuilder builder;
  while (auto token = tokenizer.next()) builder.feed(*token);
  return builder.finish();
}

const DomNode& body_of(const DomNode& document) {
  for (const DomNode& c : document.children) {
    if (c.tag == "body") return c;
  }
  throw std::logic_error("document has no body");
}

std::string debug_tree(const DomNode& document) {
  std::ostringstream out;
  dump(document, 0, out);
  return out.str();
}

std::string text_content(const DomNode& node) {
  std::string raw;
  collect_text(node, raw);
  std::string out;
  bool pending_space = false;
  for (char c : raw) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += c;
  }
  return out;
}

}  // namespace viscom
