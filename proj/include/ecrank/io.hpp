// Plain-text stage files. Factor-base, relation, matrix and certificate files
// are chained by SHA-256 of the upstream file's bytes; reading a file against
// the wrong upstream throws Error(data).
#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ecrank/class_group.hpp"
#include "ecrank/cubic_field.hpp"
#include "ecrank/elliptic.hpp"
#include "ecrank/gf2.hpp"
#include "ecrank/relation_sieve.hpp"

namespace ecrank {

std::string sha256_hex(std::string_view bytes);

std::string read_file(const std::string& path);
// Writes via a temporary file and rename so readers never see partial output.
void write_file(const std::string& path, const std::string& contents);

// "key = value" lines; blank lines and '#' comments ignored. Repeated keys
// keep the last value. Throws Error(usage) on a line without '='.
using KeyValues = std::map<std::string, std::string>;
KeyValues parse_key_values(std::string_view text);
std::string format_key_values(const KeyValues& kv);

// Whitespace- or comma-separated integers.
std::vector<BigInt> parse_integer_list(std::string_view text);

struct CurveFile {
  EllipticCurve curve;
  std::vector<BigInt> bad_primes;
  BigInt residual = 1;  // product of further bad primes each dividing disc once
  std::optional<int> root_number;
  std::optional<BigInt> conductor;
  std::optional<int> known_rank;
  std::optional<int> g;  // class-group 2-rank bound, if known
};
// Keys a1 a2 a3 a4 a6, optional bad_primes, residual, root_number, conductor,
// known_rank, g.
CurveFile parse_curve_file(std::string_view text);

// Keys c3 c2 c1 c0, or a single "form = c3 c2 c1 c0".
Cubic parse_form_file(std::string_view text);

std::string format_factor_base(const FactorBase& fb);
FactorBase parse_factor_base(std::string_view text);

// Header pins the factor-base file hash.
std::string format_relations_header(const std::string& factor_base_sha256);
std::string format_relation_line(const Relation& r);
std::string format_relations(const std::vector<Relation>& rels, const std::string& factor_base_sha256);
// Relations with b = 0 are read back as rational ones.
std::vector<Relation> parse_relations(std::string_view text, const std::string& expected_factor_base_sha256,
                                      std::size_t columns);

std::string format_matrix(const SparseBitMatrix& m, const std::string& factor_base_sha256);
SparseBitMatrix parse_matrix(std::string_view text, const std::string& expected_factor_base_sha256);

// Auxiliary primes "q r" and one line per candidate "i,j,... : bits".
std::string format_certificate(const SelmerCertificate& c, const std::string& relations_sha256);
SelmerCertificate parse_certificate(std::string_view text, const std::string& expected_relations_sha256);

}  // namespace ecrank
