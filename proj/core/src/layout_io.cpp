#include "s2l/layout_io.hpp"

#include <cmath>
#include <cstdint>
#include <set>
#include <string>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "s2l/detail/number.hpp"
#include "s2l/error.hpp"

namespace s2l {

using nlohmann::json;

namespace {

json number_json(double v) {
  if (v == std::floor(v) && std::fabs(v) < 9007199254740992.0) return json(static_cast<std::int64_t>(v));
  return json(v);
}

double get_number(const json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ParseError(fmt::format("{}.{} must be a number", where, key));
  return v.get<double>();
}

std::string get_string(const json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_string()) throw ParseError(fmt::format("{}.{} must be a string", where, key));
  return v.get<std::string>();
}

void reject_unknown(const json& obj, std::initializer_list<std::string_view> known, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (auto k : known) ok = ok || it.key() == k;
    if (!ok) throw ParseError(fmt::format("unknown field '{}' in {}", it.key(), where));
  }
}

BBox bbox_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + " must be an object");
  reject_unknown(j, {"xmin", "ymin", "width", "height"}, where);
  BBox b;
  if (j.contains("xmin")) b.xmin = get_number(j, "xmin", where);
  if (j.contains("ymin")) b.ymin = get_number(j, "ymin", where);
  if (j.contains("width")) b.width = get_number(j, "width", where);
  if (j.contains("height")) b.height = get_number(j, "height", where);
  return b;
}

Asset asset_from_json(const json& e, std::size_t index) {
  std::string where = fmt::format("elements[{}]", index);
  if (!e.is_object()) throw ParseError(where + " must be an object");
  reject_unknown(e,
                 {"name", "kind", "label", "bbox", "text_content", "image_ref", "font_size", "intrinsic_width",
                  "intrinsic_height"},
                 where);
  Asset a;
  if (!e.contains("name")) throw ValidationError(where + " has no name");
  a.name = get_string(e, "name", where);
  where = fmt::format("element '{}'", a.name);
  if (e.contains("label")) a.label = get_string(e, "label", where);
  if (!e.contains("bbox")) throw ValidationError(where + " has no bbox");
  a.bbox = bbox_from_json(e.at("bbox"), where + ".bbox");
  if (e.contains("text_content")) a.text_content = get_string(e, "text_content", where);
  if (e.contains("image_ref")) a.image_ref = get_string(e, "image_ref", where);
  if (e.contains("font_size")) a.font_size = get_number(e, "font_size", where);
  const bool has_iw = e.contains("intrinsic_width"), has_ih = e.contains("intrinsic_height");
  if (has_iw != has_ih) throw ValidationError(where + " needs both intrinsic_width and intrinsic_height");
  if (has_iw) a.intrinsic_size = std::pair{get_number(e, "intrinsic_width", where), get_number(e, "intrinsic_height", where)};
  if (e.contains("kind")) {
    auto k = parse_kind(get_string(e, "kind", where));
    if (!k) throw ParseError(fmt::format("{}: kind must be 'text' or 'image'", where));
    a.kind = *k;
  } else {
    a.kind = infer_kind(a.name, a.label, a.image_ref || a.intrinsic_size);
  }
  return a;
}

}  // namespace

Layout layout_from_json(const json& doc) {
  if (!doc.is_object()) throw ParseError("layout document must be a JSON object");
  reject_unknown(doc, {"canvas", "elements"}, "layout document");
  Layout layout;
  layout.canvas = kDefaultCanvas;
  if (doc.contains("canvas")) {
    const auto& c = doc.at("canvas");
    if (!c.is_object()) throw ParseError("canvas must be an object");
    reject_unknown(c, {"width", "height"}, "canvas");
    layout.canvas.width = get_number(c, "width", "canvas");
    layout.canvas.height = get_number(c, "height", "canvas");
  }
  if (doc.contains("elements")) {
    const auto& elements = doc.at("elements");
    if (!elements.is_array()) throw ParseError("elements must be an array");
    layout.assets.reserve(elements.size());
    for (std::size_t i = 0; i < elements.size(); ++i) layout.assets.push_back(asset_from_json(elements[i], i));
  }
  validate(layout);
  return layout;
}

Layout parse_layout_document(std::string_view bytes) {
  json doc;
  try {
    doc = json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    throw ParseError(fmt::format("malformed layout document: {}", e.what()), e.byte == 0 ? 0 : e.byte - 1);
  }
  try {
    return layout_from_json(doc);
  } catch (const json::exception& e) {
    throw ParseError(fmt::format("malformed layout document: {}", e.what()));
  }
}

json layout_to_json(const Layout& layout) {
  json doc = json::object();
  doc["canvas"] = {{"width", number_json(layout.canvas.width)}, {"height", number_json(layout.canvas.height)}};
  json elements = json::array();
  for (const auto& a : layout.assets) {
    json e = json::object();
    e["name"] = a.name;
    e["kind"] = to_string(a.kind);
    if (!a.label.empty()) e["label"] = a.label;
    e["bbox"] = {{"xmin", number_json(a.bbox.xmin)},
                 {"ymin", number_json(a.bbox.ymin)},
                 {"width", number_json(a.bbox.width)},
                 {"height", number_json(a.bbox.height)}};
    if (a.text_content) e["text_content"] = *a.text_content;
    if (a.image_ref) e["image_ref"] = *a.image_ref;
    if (a.font_size) e["font_size"] = number_json(*a.font_size);
    if (a.intrinsic_size) {
      e["intrinsic_width"] = number_json(a.intrinsic_size->first);
      e["intrinsic_height"] = number_json(a.intrinsic_size->second);
    }
    elements.push_back(std::move(e));
  }
  doc["elements"] = std::move(elements);
  return doc;
}

// ---- text format -----------------------------------------------------------

namespace {

enum class Tok { Ident, String, Number, LBrace, RBrace, Colon, End };

struct Token {
  Tok type = Tok::End;
  std::string text;
  std::size_t offset = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view in) : in_(in) {}

  Token next() {
    skip_space();
    Token t;
    t.offset = pos_;
    if (pos_ >= in_.size()) return t;
    const char c = in_[pos_];
    if (c == '{') return single(Tok::LBrace);
    if (c == '}') return single(Tok::RBrace);
    if (c == ':') return single(Tok::Colon);
    if (c == '"' || c == '\'') {
      t.type = Tok::String;
      t.text = read_string();
      // Adjacent literals concatenate.
      for (;;) {
        skip_space();
        if (pos_ < in_.size() && (in_[pos_] == '"' || in_[pos_] == '\''))
          t.text += read_string();
        else
          break;
      }
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.') {
      t.type = Tok::Number;
      while (pos_ < in_.size()) {
        const char d = in_[pos_];
        const bool exp_sign = (d == '-' || d == '+') && pos_ > t.offset && (in_[pos_ - 1] == 'e' || in_[pos_ - 1] == 'E');
        if (std::isdigit(static_cast<unsigned char>(d)) || d == '.' || d == 'e' || d == 'E' || exp_sign ||
            ((d == '-' || d == '+') && pos_ == t.offset))
          ++pos_;
        else
          break;
      }
      t.text = std::string(in_.substr(t.offset, pos_ - t.offset));
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t.type = Tok::Ident;
      while (pos_ < in_.size() && (std::isalnum(static_cast<unsigned char>(in_[pos_])) || in_[pos_] == '_')) ++pos_;
      t.text = std::string(in_.substr(t.offset, pos_ - t.offset));
      return t;
    }
    throw ParseError(fmt::format("unexpected character '{}'", c), pos_);
  }

 private:
  Token single(Tok type) {
    Token t{type, std::string(1, in_[pos_]), pos_};
    ++pos_;
    return t;
  }

  void skip_space() {
    while (pos_ < in_.size()) {
      const char c = in_[pos_];
      if (std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == ';') {
        ++pos_;
      } else if (c == '#') {
        while (pos_ < in_.size() && in_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::string read_string() {
    const char quote = in_[pos_];
    const std::size_t start = pos_++;
    std::string out;
    while (true) {
      if (pos_ >= in_.size()) throw ParseError("unterminated string", start);
      const char c = in_[pos_++];
      if (c == quote) break;
      if (c == '\n') throw ParseError("newline in string", pos_ - 1);
      if (c != '\\') {
        out += c;
        continue;
      }
      if (pos_ >= in_.size()) throw ParseError("unterminated escape", pos_ - 1);
      const char e = in_[pos_++];
      switch (e) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'r': out += '\r'; break;
        case 'a': out += '\a'; break;
        case 'b': out += '\b'; break;
        case 'f': out += '\f'; break;
        case 'v': out += '\v'; break;
        case '\\': out += '\\'; break;
        case '\'': out += '\''; break;
        case '"': out += '"'; break;
        case '?': out += '?'; break;
        case 'x': {
          int value = 0, digits = 0;
          while (digits < 2 && pos_ < in_.size() && std::isxdigit(static_cast<unsigned char>(in_[pos_]))) {
            value = value * 16 + std::stoi(std::string(1, in_[pos_]), nullptr, 16);
            ++pos_;
            ++digits;
          }
          if (digits == 0) throw ParseError("\\x escape without digits", pos_);
          out += static_cast<char>(value);
          break;
        }
        default:
          if (e >= '0' && e <= '7') {
            int value = e - '0', digits = 1;
            while (digits < 3 && pos_ < in_.size() && in_[pos_] >= '0' && in_[pos_] <= '7') {
              value = value * 8 + (in_[pos_++] - '0');
              ++digits;
            }
            out += static_cast<char>(value);
          } else {
            throw ParseError(fmt::format("unknown escape '\\{}'", e), pos_ - 1);
          }
      }
    }
    return out;
  }

  std::string_view in_;
  std::size_t pos_ = 0;
};

class TextProtoParser {
 public:
  explicit TextProtoParser(std::string_view text) : lex_(text) { advance(); }

  Layout parse(std::optional<Canvas> canvas) {
    Layout layout;
    bool have_canvas = false;
    while (cur_.type != Tok::End) {
      const Token field = expect(Tok::Ident, "field name");
      if (field.text == "canvas") {
        if (have_canvas) throw ParseError("duplicate field 'canvas'", field.offset);
        have_canvas = true;
        open_message();
        layout.canvas = parse_canvas();
      } else if (field.text == "elements") {
        open_message();
        layout.assets.push_back(parse_element(field.offset));
      } else {
        throw ParseError(fmt::format("unknown field '{}'", field.text), field.offset);
      }
    }
    if (!have_canvas) layout.canvas = canvas.value_or(kDefaultCanvas);
    validate(layout);
    return layout;
  }

 private:
  void advance() { cur_ = lex_.next(); }

  Token expect(Tok type, std::string_view what) {
    if (cur_.type != type)
      throw ParseError(fmt::format("expected {}, found '{}'", what, cur_.type == Tok::End ? "end of input" : cur_.text),
                       cur_.offset);
    Token t = cur_;
    advance();
    return t;
  }

  // `field {` or `field: {`
  void open_message() {
    if (cur_.type == Tok::Colon) advance();
    expect(Tok::LBrace, "'{'");
  }

  void colon() { expect(Tok::Colon, "':'"); }

  double number() {
    const Token t = expect(Tok::Number, "number");
    auto v = detail::parse_number(t.text[0] == '+' ? std::string_view(t.text).substr(1) : std::string_view(t.text));
    if (!v || !std::isfinite(*v)) throw ParseError(fmt::format("invalid number '{}'", t.text), t.offset);
    return *v;
  }

  std::string string_value() { return expect(Tok::String, "string").text; }

  template <class F>
  void fields(std::set<std::string>& seen, F&& on_field) {
    while (cur_.type != Tok::RBrace) {
      if (cur_.type == Tok::End) throw ParseError("unexpected end of input, expected '}'", cur_.offset);
      const Token f = expect(Tok::Ident, "field name");
      if (!seen.insert(f.text).second) throw ParseError(fmt::format("duplicate field '{}'", f.text), f.offset);
      on_field(f);
    }
    advance();
  }

  Canvas parse_canvas() {
    Canvas c;
    std::set<std::string> seen;
    fields(seen, [&](const Token& f) {
      if (f.text == "width") {
        colon();
        c.width = number();
      } else if (f.text == "height") {
        colon();
        c.height = number();
      } else {
        throw ParseError(fmt::format("unknown field '{}' in canvas", f.text), f.offset);
      }
    });
    return c;
  }

  BBox parse_bbox() {
    BBox b;
    std::set<std::string> seen;
    fields(seen, [&](const Token& f) {
      double* slot = f.text == "xmin"    ? &b.xmin
                     : f.text == "ymin"  ? &b.ymin
                     : f.text == "width" ? &b.width
                     : f.text == "height" ? &b.height
                                          : nullptr;
      if (!slot) throw ParseError(fmt::format("unknown field '{}' in bbox", f.text), f.offset);
      colon();
      *slot = number();
    });
    return b;
  }

  Asset parse_element(std::size_t offset) {
    Asset a;
    std::optional<Kind> kind;
    std::optional<double> iw, ih;
    std::set<std::string> seen;
    fields(seen, [&](const Token& f) {
      const std::string& n = f.text;
      if (n == "bbox") {
        open_message();
        a.bbox = parse_bbox();
        return;
      }
      colon();
      if (n == "name") {
        a.name = string_value();
      } else if (n == "kind") {
        const Token v = cur_;
        if (v.type != Tok::Ident && v.type != Tok::String) throw ParseError("expected kind", v.offset);
        advance();
        kind = parse_kind(v.text);
        if (!kind) throw ParseError(fmt::format("unknown kind '{}'", v.text), v.offset);
      } else if (n == "label") {
        a.label = string_value();
      } else if (n == "text_content") {
        a.text_content = string_value();
      } else if (n == "image_ref") {
        a.image_ref = string_value();
      } else if (n == "font_size") {
        a.font_size = number();
      } else if (n == "intrinsic_width") {
        iw = number();
      } else if (n == "intrinsic_height") {
        ih = number();
      } else {
        throw ParseError(fmt::format("unknown field '{}' in elements", n), f.offset);
      }
    });
    if (!seen.count("name")) throw ValidationError(fmt::format("element at byte {} has no name", offset));
    if (!seen.count("bbox")) throw ValidationError(fmt::format("element '{}' has no bbox", a.name));
    if (iw.has_value() != ih.has_value())
      throw ValidationError(fmt::format("element '{}' needs both intrinsic_width and intrinsic_height", a.name));
    if (iw) a.intrinsic_size = std::pair{*iw, *ih};
    a.kind = kind.value_or(infer_kind(a.name, a.label, a.image_ref || a.intrinsic_size));
    return a;
  }

  Lexer lex_;
  Token cur_;
};

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20 || c == 0x7f)
          out += fmt::format("\\{:03o}", c);
        else
          out += ch;
    }
  }
  out += '"';
  return out;
}

std::string to_textproto(const Layout& layout) {
  using detail::format_number;
  std::string out = fmt::format("canvas {{ width: {} height: {} }}\n", format_number(layout.canvas.width),
                                format_number(layout.canvas.height));
  for (const auto& a : layout.assets) {
    out += "elements { name: " + quote(a.name) + " kind: " + (a.kind == Kind::Image ? "IMAGE" : "TEXT");
    if (!a.label.empty()) out += " label: " + quote(a.label);
    out += fmt::format(" bbox {{ xmin: {} ymin: {} width: {} height: {} }}", format_number(a.bbox.xmin),
                       format_number(a.bbox.ymin), format_number(a.bbox.width), format_number(a.bbox.height));
    if (a.text_content) out += " text_content: " + quote(*a.text_content);
    if (a.image_ref) out += " image_ref: " + quote(*a.image_ref);
    if (a.font_size) out += " font_size: " + format_number(*a.font_size);
    if (a.intrinsic_size)
      out += fmt::format(" intrinsic_width: {} intrinsic_height: {}", format_number(a.intrinsic_size->first),
                         format_number(a.intrinsic_size->second));
    out += " }\n";
  }
  return out;
}

}  // namespace

Layout parse_layout_textproto(std::string_view text, std::optional<Canvas> canvas) {
  return TextProtoParser(text).parse(canvas);
}

std::string serialize_layout(const Layout& layout, LayoutFormat format) {
  if (format == LayoutFormat::TextProto) return to_textproto(layout);
  return layout_to_json(layout).dump(2) + "\n";
}

Layout parse_layout_auto(std::string_view bytes, std::optional<Canvas> canvas) {
  for (char c : bytes) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (c == '{') return parse_layout_document(bytes);
    break;
  }
  return parse_layout_textproto(bytes, canvas);
}

}  // namespace s2l
