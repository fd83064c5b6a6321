#include "ecrank/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ecrank {

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr))
    throw Error(ErrorKind::math, "sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::usage, "cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::usage, "cannot write " + path);
    out << contents;
    if (!out) throw Error(ErrorKind::usage, "write failed for " + path);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw Error(ErrorKind::usage, "cannot rename onto " + path);
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> lines_of(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start < text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    out.emplace_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return out;
}

BigInt parse_big(const std::string& s, const char* what) {
  BigInt x;
  if (s.empty() || x.set_str(s[0] == '+' ? s.substr(1) : s, 10) != 0)
    throw Error(ErrorKind::data, std::string("malformed integer for ") + what + ": '" + s + "'");
  return x;
}

uint64_t parse_u64(const std::string& s, const char* what) {
  BigInt x = parse_big(s, what);
  if (x < 0 || !x.fits_ulong_p()) throw Error(ErrorKind::data, std::string(what) + " out of range: " + s);
  return x.get_ui();
}

// Header lines "key value..." before the body; returns the next line index.
std::size_t expect(const std::vector<std::string>& lines, std::size_t i, const std::string& key,
                   std::vector<std::string>& values) {
  while (i < lines.size() && (trim(lines[i]).empty() || trim(lines[i])[0] == '#')) ++i;
  if (i == lines.size()) throw Error(ErrorKind::data, "missing header line '" + key + "'");
  std::istringstream ls(lines[i]);
  std::string k;
  ls >> k;
  if (k != key) throw Error(ErrorKind::data, "expected header '" + key + "', found '" + k + "'");
  values.clear();
  for (std::string v; ls >> v;) values.push_back(v);
  return i + 1;
}

void check_hash(const std::string& found, const std::string& expected, const char* what) {
  if (!expected.empty() && found != expected)
    throw Error(ErrorKind::data, std::string(what) + " hash mismatch: file pins " + found + ", expected " + expected);
}

}  // namespace

KeyValues parse_key_values(std::string_view text) {
  KeyValues kv;
  for (auto& raw : lines_of(text)) {
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::usage, "config line without '=': " + line);
    std::string key = trim(std::string_view(line).substr(0, eq));
    if (key.empty()) throw Error(ErrorKind::usage, "config line without a key: " + line);
    kv[key] = trim(std::string_view(line).substr(eq + 1));
  }
  return kv;
}

std::string format_key_values(const KeyValues& kv) {
  std::string out;
  for (auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

std::vector<BigInt> parse_integer_list(std::string_view text) {
  std::string s(text);
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream in(s);
  std::vector<BigInt> out;
  for (std::string t; in >> t;) out.push_back(parse_big(t, "list"));
  return out;
}

CurveFile parse_curve_file(std::string_view text) {
  auto kv = parse_key_values(text);
  auto need = [&](const char* k) {
    auto it = kv.find(k);
    if (it == kv.end()) throw Error(ErrorKind::usage, std::string("curve file: missing key ") + k);
    return parse_big(it->second, k);
  };
  CurveFile c;
  c.curve = {need("a1"), need("a2"), need("a3"), need("a4"), need("a6")};
  if (kv.count("bad_primes")) c.bad_primes = parse_integer_list(kv["bad_primes"]);
  if (kv.count("residual")) c.residual = parse_big(kv["residual"], "residual");
  if (kv.count("root_number")) {
    const BigInt w = parse_big(kv["root_number"], "root_number");
    if (w != 1 && w != -1) throw Error(ErrorKind::usage, "root_number must be +1 or -1");
    c.root_number = static_cast<int>(w.get_si());
  }
  if (kv.count("conductor")) c.conductor = parse_big(kv["conductor"], "conductor");
  if (kv.count("known_rank")) c.known_rank = static_cast<int>(parse_big(kv["known_rank"], "known_rank").get_si());
  if (kv.count("g")) c.g = static_cast<int>(parse_big(kv["g"], "g").get_si());
  return c;
}

Cubic parse_form_file(std::string_view text) {
  auto kv = parse_key_values(text);
  if (kv.count("form")) {
    auto v = parse_integer_list(kv["form"]);
    if (v.size() != 4) throw Error(ErrorKind::usage, "form needs four coefficients");
    return {v[0], v[1], v[2], v[3]};
  }
  Cubic f;
  const char* keys[] = {"c3", "c2", "c1", "c0"};
  for (int i = 0; i < 4; ++i) {
    if (!kv.count(keys[i])) throw Error(ErrorKind::usage, std::string("form file: missing key ") + keys[i]);
    f[static_cast<std::size_t>(i)] = parse_big(kv[keys[i]], keys[i]);
  }
  return f;
}

std::string format_factor_base(const FactorBase& fb) {
  std::ostringstream o;
  const auto& f = fb.field.form;
  o << "# ecrank factor base\n";
  o << "form " << f[0] << " " << f[1] << " " << f[2] << " " << f[3] << "\n";
  o << "disc " << fb.field.disc << "\n";
  o << "signature " << fb.field.r1 << " " << fb.field.r2 << "\n";
  o << "bound " << fb.bound << "\n";
  o << "primes " << fb.primes.size() << "\n";
  for (auto& p : fb.primes) o << p.p << " " << p.r << " " << p.s << " " << (p.ramified ? 1 : 0) << " " << p.alpha_valuation << "\n";
  return o.str();
}

FactorBase parse_factor_base(std::string_view text) {
  auto lines = lines_of(text);
  std::vector<std::string> v;
  std::size_t i = expect(lines, 0, "form", v);
  if (v.size() != 4) throw Error(ErrorKind::data, "factor base: form needs four coefficients");
  FactorBase fb;
  for (std::size_t k = 0; k < 4; ++k) fb.field.form[k] = parse_big(v[k], "form");
  i = expect(lines, i, "disc", v);
  if (v.size() != 1) throw Error(ErrorKind::data, "factor base: bad disc line");
  fb.field.disc = parse_big(v[0], "disc");
  if (fb.field.disc != disc(fb.field.form)) throw Error(ErrorKind::data, "factor base: disc does not match the form");
  i = expect(lines, i, "signature", v);
  if (v.size() != 2) throw Error(ErrorKind::data, "factor base: bad signature line");
  fb.field.r1 = static_cast<int>(parse_u64(v[0], "r1"));
  fb.field.r2 = static_cast<int>(parse_u64(v[1], "r2"));
  i = expect(lines, i, "bound", v);
  if (v.size() != 1) throw Error(ErrorKind::data, "factor base: bad bound line");
  fb.bound = parse_big(v[0], "bound");
  i = expect(lines, i, "primes", v);
  if (v.size() != 1) throw Error(ErrorKind::data, "factor base: bad primes line");
  const uint64_t n = parse_u64(v[0], "primes");
  for (; i < lines.size(); ++i) {
    std::string line = trim(lines[i]);
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    FactorBasePrime p;
    int ram = 0;
    if (!(ls >> p.p >> p.r >> p.s >> ram >> p.alpha_valuation) || (ram != 0 && ram != 1) || p.s > 1)
      throw Error(ErrorKind::data, "factor base: malformed line '" + line + "'");
    p.ramified = ram == 1;
    if (!fb.primes.empty()) {
      auto& q = fb.primes.back();
      if (std::make_pair(q.p, root_key(q.p, q.r, q.s)) >= std::make_pair(p.p, root_key(p.p, p.r, p.s)))
        throw Error(ErrorKind::data, "factor base: lines out of order at p = " + std::to_string(p.p));
    }
    fb.primes.push_back(p);
  }
  if (fb.primes.size() != n) throw Error(ErrorKind::data, "factor base: count does not match the header");
  index_factor_base(fb);
  return fb;
}

std::string format_relations_header(const std::string& factor_base_sha256) {
  return "# ecrank relations\nfactor-base-sha256 " + factor_base_sha256 + "\n";
}

std::string format_relation_line(const Relation& r) {
  std::string s = r.a.get_str() + " " + r.b.get_str() + " :";
  for (std::size_t k = 0; k < r.exps.size(); ++k)
    s += (k ? "," : " ") + std::to_string(r.exps[k].first) + "^" + std::to_string(r.exps[k].second);
  return s + "\n";
}

std::string format_relations(const std::vector<Relation>& rels, const std::string& factor_base_sha256) {
  std::string out = format_relations_header(factor_base_sha256);
  for (auto& r : rels) out += format_relation_line(r);
  return out;
}

std::vector<Relation> parse_relations(std::string_view text, const std::string& expected_factor_base_sha256,
                                      std::size_t columns) {
  auto lines = lines_of(text);
  std::vector<std::string> v;
  std::size_t i = expect(lines, 0, "factor-base-sha256", v);
  if (v.size() != 1) throw Error(ErrorKind::data, "relations: bad hash line");
  check_hash(v[0], expected_factor_base_sha256, "relations: factor base");
  std::vector<Relation> out;
  for (; i < lines.size(); ++i) {
    std::string line = trim(lines[i]);
    if (line.empty() || line[0] == '#') continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) throw Error(ErrorKind::data, "relations: missing ':' in '" + line + "'");
    std::istringstream head(line.substr(0, colon));
    std::string a, b, extra;
    if (!(head >> a >> b) || (head >> extra)) throw Error(ErrorKind::data, "relations: malformed pair in '" + line + "'");
    Relation r;
    r.a = parse_big(a, "a");
    r.b = parse_big(b, "b");
    r.source = r.b == 0 ? RelationSource::rational : RelationSource::sieved;
    std::string body = line.substr(colon + 1);
    std::replace(body.begin(), body.end(), ',', ' ');
    std::istringstream ls(body);
    for (std::string t; ls >> t;) {
      auto caret = t.find('^');
      if (caret == std::string::npos) throw Error(ErrorKind::data, "relations: malformed entry '" + t + "'");
      const uint64_t c = parse_u64(t.substr(0, caret), "column");
      const BigInt e = parse_big(t.substr(caret + 1), "exponent");
      if (c >= columns) throw Error(ErrorKind::data, "relations: column " + std::to_string(c) + " outside the factor base");
      if (e == 0 || !e.fits_sint_p()) throw Error(ErrorKind::data, "relations: bad exponent in '" + t + "'");
      if (!r.exps.empty() && r.exps.back().first >= c) throw Error(ErrorKind::data, "relations: columns not ascending");
      r.exps.push_back({static_cast<uint32_t>(c), static_cast<int>(e.get_si())});
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_matrix(const SparseBitMatrix& m, const std::string& factor_base_sha256) {
  std::ostringstream o;
  o << "# ecrank matrix\n";
  o << "factor-base-sha256 " << factor_base_sha256 << "\n";
  o << "size " << m.rows() << " " << m.cols() << "\n";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto& r = m.row(i);
    for (std::size_t k = 0; k < r.size(); ++k) o << (k ? " " : "") << r[k];
    o << "\n";
  }
  return o.str();
}

SparseBitMatrix parse_matrix(std::string_view text, const std::string& expected_factor_base_sha256) {
  auto lines = lines_of(text);
  std::vector<std::string> v;
  std::size_t i = expect(lines, 0, "factor-base-sha256", v);
  if (v.size() != 1) throw Error(ErrorKind::data, "matrix: bad hash line");
  check_hash(v[0], expected_factor_base_sha256, "matrix: factor base");
  i = expect(lines, i, "size", v);
  if (v.size() != 2) throw Error(ErrorKind::data, "matrix: bad size line");
  const uint64_t rows = parse_u64(v[0], "rows"), cols = parse_u64(v[1], "cols");
  // Empty rows are empty lines, so the body is read positionally.
  if (lines.size() - i != rows) throw Error(ErrorKind::data, "matrix: row count does not match the header");
  SparseBitMatrix m(cols);
  for (; i < lines.size(); ++i) {
    std::istringstream ls(lines[i]);
    std::vector<uint32_t> row;
    for (std::string t; ls >> t;) {
      const uint64_t c = parse_u64(t, "column");
      if (c >= cols) throw Error(ErrorKind::data, "matrix: column outside the header size");
      row.push_back(static_cast<uint32_t>(c));
    }
    m.add_row(std::move(row));
  }
  return m;
}

std::string format_certificate(const SelmerCertificate& c, const std::string& relations_sha256) {
  std::ostringstream o;
  o << "# ecrank selmer certificate\n";
  o << "relations-sha256 " << relations_sha256 << "\n";
  o << "primes " << c.primes.size() << "\n";
  for (auto& p : c.primes) o << p.q << " " << p.r << "\n";
  o << "candidates " << c.candidates.size() << "\n";
  for (std::size_t i = 0; i < c.candidates.size(); ++i) {
    const auto& m = c.candidates[i];
    for (std::size_t k = 0; k < m.size(); ++k) o << (k ? "," : "") << m[k];
    o << " : ";
    for (std::size_t j = 0; j < c.characters[i].size(); ++j) o << (c.characters[i].get(j) ? '1' : '0');
    o << "\n";
  }
  return o.str();
}

SelmerCertificate parse_certificate(std::string_view text, const std::string& expected_relations_sha256) {
  auto lines = lines_of(text);
  std::vector<std::string> v;
  std::size_t i = expect(lines, 0, "relations-sha256", v);
  if (v.size() != 1) throw Error(ErrorKind::data, "certificate: bad hash line");
  check_hash(v[0], expected_relations_sha256, "certificate: relations");
  i = expect(lines, i, "primes", v);
  if (v.size() != 1) throw Error(ErrorKind::data, "certificate: bad primes line");
  const uint64_t nq = parse_u64(v[0], "primes");
  SelmerCertificate c;
  for (uint64_t k = 0; k < nq; ++k, ++i) {
    if (i >= lines.size()) throw Error(ErrorKind::data, "certificate: truncated prime list");
    std::istringstream ls(lines[i]);
    AuxPrime p;
    if (!(ls >> p.q >> p.r)) throw Error(ErrorKind::data, "certificate: malformed prime line");
    c.primes.push_back(p);
  }
  i = expect(lines, i, "candidates", v);
  if (v.size() != 1) throw Error(ErrorKind::data, "certificate: bad candidates line");
  const uint64_t nc = parse_u64(v[0], "candidates");
  for (; i < lines.size(); ++i) {
    std::string line = trim(lines[i]);
    if (line.empty() || line[0] == '#') continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) throw Error(ErrorKind::data, "certificate: missing ':'");
    std::vector<std::size_t> members;
    for (auto& x : parse_integer_list(line.substr(0, colon))) members.push_back(x.get_ui());
    std::string bits = trim(std::string_view(line).substr(colon + 1));
    if (bits.size() != c.primes.size()) throw Error(ErrorKind::data, "certificate: character width mismatch");
    BitVector b(bits.size());
    for (std::size_t j = 0; j < bits.size(); ++j) {
      if (bits[j] != '0' && bits[j] != '1') throw Error(ErrorKind::data, "certificate: bad character bit");
      if (bits[j] == '1') b.set(j);
    }
    c.candidates.push_back(std::move(members));
    c.characters.push_back(std::move(b));
  }
  if (c.candidates.size() != nc) throw Error(ErrorKind::data, "certificate: candidate count mismatch");
  return c;
}

}  // namespace ecrank
