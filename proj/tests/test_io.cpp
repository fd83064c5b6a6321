#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <functional>

#include "ecrank/io.hpp"

using namespace ecrank;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::math;
}

}  // namespace

TEST_CASE("sha256 known answers") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("key-value config and curve files") {
  auto kv = parse_key_values("# comment\n a = 1 \n\nb=two words\na = 3\n");
  CHECK(kv.size() == 2);
  CHECK(kv["a"] == "3");
  CHECK(kv["b"] == "two words");
  CHECK(parse_key_values(format_key_values(kv)) == kv);
  CHECK(kind_of([] { parse_key_values("no equals sign"); }) == ErrorKind::usage);

  auto c = parse_curve_file("a1 = 0\na2 = 0\na3 = 1\na4 = -1\na6 = 0\nbad_primes = 37\nroot_number = -1\nconductor = 37\n");
  CHECK(c.curve.a3 == 1);
  CHECK(c.curve.a4 == -1);
  CHECK(c.bad_primes == std::vector<BigInt>{37});
  CHECK(*c.root_number == -1);
  CHECK(*c.conductor == 37);
  CHECK(kind_of([] { parse_curve_file("a1 = 0\n"); }) == ErrorKind::usage);
  CHECK(kind_of([] { parse_curve_file("a1=0\na2=0\na3=0\na4=x\na6=0\n"); }) == ErrorKind::data);
  CHECK(parse_integer_list("2, 3 5,7") == std::vector<BigInt>{2, 3, 5, 7});

  CHECK(parse_form_file("form = 1 0 -1 -1\n") == Cubic{1, 0, -1, -1});
  CHECK(parse_form_file("c3=49\nc2=1\nc1=3\nc0=5\n") == Cubic{49, 1, 3, 5});
}

TEST_CASE("factor base round trip") {
  auto fb = build_factor_base(field_from_form(Cubic{49, 1, 3, 5}), 500);
  const std::string text = format_factor_base(fb);
  auto back = parse_factor_base(text);
  CHECK(back.primes == fb.primes);
  CHECK(back.infinite_columns == fb.infinite_columns);
  CHECK(back.field.form == fb.field.form);
  CHECK(back.bound == fb.bound);
  CHECK(format_factor_base(back) == text);  // byte-identical

  std::string bad = text;
  bad.replace(bad.find("primes "), std::string("primes ").size() + std::to_string(fb.primes.size()).size(),
              "primes 3");
  CHECK(kind_of([&] { parse_factor_base(bad); }) == ErrorKind::data);
}

TEST_CASE("relations and matrices are pinned to the factor base") {
  auto fb = build_factor_base(field_from_form(Cubic{1, 0, -1, -1}), 200);
  const std::string fb_hash = sha256_hex(format_factor_base(fb));
  SieveParams prm;
  prm.A = 500;
  prm.b_hi = 10;
  auto rels = rational_relations(fb, 200);
  auto sieved = sieve_relations(fb, prm);
  rels.insert(rels.end(), sieved.begin(), sieved.end());
  REQUIRE(rels.size() > 100);

  const std::string text = format_relations(rels, fb_hash);
  auto back = parse_relations(text, fb_hash, fb.primes.size());
  CHECK(back == rels);
  for (std::size_t i = 0; i < rels.size(); ++i) CHECK((back[i].b == 0) == (rels[i].source == RelationSource::rational));
  CHECK(format_relations(back, fb_hash) == text);

  auto other = build_factor_base(field_from_form(Cubic{1, 0, -1, -1}), 201);
  const std::string other_hash = sha256_hex(format_factor_base(other));
  CHECK(other_hash != fb_hash);
  CHECK(kind_of([&] { parse_relations(text, other_hash, fb.primes.size()); }) == ErrorKind::data);
  CHECK(kind_of([&] { parse_relations(text, fb_hash, 3); }) == ErrorKind::data);
  CHECK(kind_of([&] { parse_relations(format_relations_header(fb_hash) + "1 2 3\n", fb_hash, 10); }) ==
        ErrorKind::data);

  SparseBitMatrix m(6);
  m.add_row({0, 5});
  m.add_row({});
  m.add_row({1, 2, 3});
  const std::string mt = format_matrix(m, fb_hash);
  auto mb = parse_matrix(mt, fb_hash);
  REQUIRE(mb.rows() == 3);
  CHECK(mb.cols() == 6);
  CHECK(mb.row(0) == m.row(0));
  CHECK(mb.row(1).empty());
  CHECK(mb.row(2) == m.row(2));
  CHECK(kind_of([&] { parse_matrix(mt, other_hash); }) == ErrorKind::data);
}

TEST_CASE("certificate round trip") {
  SelmerCertificate c;
  c.primes = {{211, 5}, {223, 17}};
  c.candidates = {{0, 3, 9}, {2}};
  BitVector b0(2), b1(2);
  b0.set(1);
  b1.set(0);
  b1.set(1);
  c.characters = {b0, b1};
  const std::string t = format_certificate(c, "abc");
  auto back = parse_certificate(t, "abc");
  CHECK(back.candidates == c.candidates);
  CHECK(back.characters == c.characters);
  CHECK(back.primes.size() == 2);
  CHECK(back.primes[1].q == 223);
  CHECK(kind_of([&] { parse_certificate(t, "abd"); }) == ErrorKind::data);
}

TEST_CASE("atomic file writes") {
  auto dir = std::filesystem::temp_directory_path() / "ecrank_io_test";
  std::filesystem::create_directories(dir);
  const std::string p = (dir / "x.txt").string();
  write_file(p, "one\n");
  write_file(p, "two\n");
  CHECK(read_file(p) == "two\n");
  CHECK_FALSE(std::filesystem::exists(p + ".tmp"));
  CHECK(kind_of([&] { read_file((dir / "missing").string()); }) == ErrorKind::usage);
  std::filesystem::remove_all(dir);
}
