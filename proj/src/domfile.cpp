#include <cctype>
#include <fstream>
#include <sstream>

#include "collar/domfile.hpp"

namespace collar {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Splits "k1 = v1, k2 = v2" at top-level commas (quotes and brackets nest).
std::vector<std::string> split_top_level(const std::string& s, int line) {
  std::vector<std::string> parts;
  int depth = 0;
  bool quoted = false;
  std::string current;
  for (char c : s) {
    if (quoted) {
      if (c == '"') quoted = false;
      current += c;
      continue;
    }
    switch (c) {
      case '"': quoted = true; current += c; break;
      case '[':
      case '{': ++depth; current += c; break;
      case ']':
      case '}': --depth; current += c; break;
      case ',':
        if (depth == 0) {
          parts.push_back(current);
          current.clear();
        } else {
          current += c;
        }
        break;
      default: current += c; break;
    }
  }
  if (quoted) throw parse_error("unterminated string", line, 1);
  if (!trim(current).empty()) parts.push_back(current);
  return parts;
}

std::pair<std::string, std::string> split_key_value(const std::string& s, int line) {
  std::size_t eq = std::string::npos;
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (!quoted && s[i] == '=') {
      eq = i;
      break;
    }
  }
  if (eq == std::string::npos) throw parse_error("expected 'key = value'", line, 1);
  return {trim(s.substr(0, eq)), trim(s.substr(eq + 1))};
}

std::string unquote(const std::string& s, int line) {
  if (s.size() < 2 || s.front() != '"' || s.back() != '"')
    throw parse_error("expected a quoted string, got '" + s + "'", line, 1);
  return s.substr(1, s.size() - 2);
}

std::vector<double> parse_array(const std::string& s, int line) {
  if (s.size() < 2 || s.front() != '[' || s.back() != ']')
    throw parse_error("expected an array [..]", line, 1);
  std::vector<double> out;
  for (const std::string& item : split_top_level(s.substr(1, s.size() - 2), line)) {
    std::string t = trim(item);
    try {
      std::size_t used = 0;
      out.push_back(std::stod(t, &used));
      if (used != t.size()) throw std::invalid_argument(t);
    } catch (const std::exception&) {
      throw parse_error("bad number '" + t + "' in array", line, 1);
    }
  }
  return out;
}

std::string strip_braces(const std::string& s, int line) {
  std::string t = trim(s);
  if (t.size() < 2 || t.front() != '{' || t.back() != '}')
    throw parse_error("expected an inline table {..}", line, 1);
  return t.substr(1, t.size() - 2);
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

DomainSpec parse_dom_text(const std::string& text) {
  DomainSpec spec;
  spec.digest = fnv1a(text);
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::size_t hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    auto [key, value] = split_key_value(line, line_no);

    if (key == "dim") {
      spec.dim = std::stoi(value);
    } else if (key == "complex_dim") {
      spec.complex_dim = std::stoi(value);
    } else if (key == "name") {
      spec.name = value.front() == '"' ? unquote(value, line_no) : value;
    } else if (key == "rho") {
      spec.rho = unquote(value, line_no);
    } else if (key == "branch") {
      std::string guard, expr;
      for (const std::string& item : split_top_level(strip_braces(value, line_no), line_no)) {
        auto [k, v] = split_key_value(item, line_no);
        if (k == "guard")
          guard = unquote(v, line_no);
        else if (k == "rho")
          expr = unquote(v, line_no);
        else
          throw parse_error("unknown branch key '" + k + "'", line_no, 1);
      }
      if (guard.empty() || expr.empty())
        throw parse_error("branch requires guard and rho", line_no, 1);
      spec.branches.emplace_back(guard, expr);
    } else if (key == "region") {
      std::vector<double> mn, mx;
      for (const std::string& item : split_top_level(strip_braces(value, line_no), line_no)) {
        auto [k, v] = split_key_value(item, line_no);
        if (k == "min")
          mn = parse_array(v, line_no);
        else if (k == "max")
          mx = parse_array(v, line_no);
        else
          throw parse_error("unknown region key '" + k + "'", line_no, 1);
      }
      if (mn.empty() || mn.size() != mx.size())
        throw parse_error("region needs matching min/max arrays", line_no, 1);
      spec.region.min = Eigen::Map<Vec>(mn.data(), mn.size());
      spec.region.max = Eigen::Map<Vec>(mx.data(), mx.size());
      spec.has_region = true;
    } else {
      throw parse_error("unknown key '" + key + "'", line_no, 1);
    }
  }
  if (spec.dim <= 0) throw parse_error("missing or invalid 'dim'", line_no, 1);
  if (spec.rho.empty()) throw parse_error("missing 'rho'", line_no, 1);
  if (spec.has_region && spec.region.dim() != spec.dim)
    throw parse_error("region dimension does not match 'dim'", line_no, 1);
  return spec;
}

DomainSpec load_dom_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open spec file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  DomainSpec spec = parse_dom_text(buffer.str());
  if (spec.name.empty()) {
    std::size_t slash = path.find_last_of("/\\");
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    std::size_t dot = base.find_last_of('.');
    spec.name = dot == std::string::npos ? base : base.substr(0, dot);
  }
  return spec;
}

ScalarField field_from_spec(const DomainSpec& spec, int max_jet_order) {
  return make_field(spec.dim, spec.rho, spec.branches, max_jet_order);
}

std::string digest_hex(std::uint64_t digest) {
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = hex[digest & 0xF];
    digest >>= 4;
  }
  return out;
}

}  // namespace collar
