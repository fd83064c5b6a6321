// Command-line front end. Each subcommand reads plain-text inputs, prints a
// report and, where it produces an artifact, writes the artifact plus a
// "<artifact>.log" recording parameters and input/output hashes.
//
// Exit status: 0 ok, 1 usage, 2 data inconsistency, 3 budget exceeded.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <iostream>
#include <sstream>

#include "ecrank/analytic_rank.hpp"
#include "ecrank/class_group.hpp"
#include "ecrank/io.hpp"
#include "ecrank/rank_bounds.hpp"
#include "ecrank/sieve_planner.hpp"

using namespace ecrank;

namespace {

std::string fixed(const Real& x, int digits = 10) { return x.str(digits, std::ios::fixed); }

std::string form_str(const Cubic& f) {
  return f[0].get_str() + " " + f[1].get_str() + " " + f[2].get_str() + " " + f[3].get_str();
}

BigInt big(const std::string& s, const char* what) {
  BigInt x;
  if (s.empty() || x.set_str(s, 10) != 0) throw Error(ErrorKind::usage, std::string("bad integer for --") + what);
  return x;
}

// Artifact log: parameters and hashes, no timestamps.
void write_log(const std::string& artifact, const std::string& command, const KeyValues& params,
               const KeyValues& inputs) {
  KeyValues kv = params;
  kv["command"] = command;
  for (auto& [name, path] : inputs) kv["input." + name + ".sha256"] = sha256_hex(read_file(path));
  kv["output.sha256"] = sha256_hex(read_file(artifact));
  write_file(artifact + ".log", format_key_values(kv));
}

struct LoadedBase {
  FactorBase fb;
  std::string hash;
};

LoadedBase load_base(const std::string& path) {
  const std::string text = read_file(path);
  return {parse_factor_base(text), sha256_hex(text)};
}

Cubic load_form(const std::string& form_path, const std::string& curve_path) {
  if (!form_path.empty()) return parse_form_file(read_file(form_path));
  if (!curve_path.empty()) return two_division_cubic(parse_curve_file(read_file(curve_path)).curve);
  throw Error(ErrorKind::usage, "need --form or --curve");
}

// Config keys become "--key value" arguments unless the flag is already given.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<long>(i));
      break;
    }
  }
  if (path.empty()) return args;
  for (auto& [k, v] : parse_key_values(read_file(path))) {
    const std::string flag = "--" + k;
    bool given = false;
    for (auto& a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0) given = true;
    if (given) continue;
    if (v == "true") {
      args.push_back(flag);
    } else if (v != "false") {
      args.push_back(flag);
      args.push_back(v);
    }
  }
  return args;
}

int run(int argc, char** argv) {
  CLI::App app{"Elliptic-curve rank bounds from cubic class groups, the explicit formula and Selmer bounds"};
  app.require_subcommand(1);
  unsigned threads = 0;

  auto add_threads = [&](CLI::App* s) { s->add_option("--threads", threads, "Worker threads (0 = all cores)"); };

  // curve-analyze
  std::string curve_path, form_path, output, fb_path, rel_path;
  uint64_t factor_limit = 1000000;
  auto* ca = app.add_subcommand("curve-analyze", "Invariants, 2-division cubic and local reduction data");
  ca->add_option("--curve", curve_path, "Curve key-value file")->required();
  ca->add_option("--factor-limit", factor_limit, "Trial-division limit for the discriminant");

  // analytic-bound
  std::string delta_s = "1";
  std::string ap_cache_path;
  uint64_t count_budget = 10000000;
  auto* ab = app.add_subcommand("analytic-bound", "Explicit-formula bound on the analytic rank");
  ab->add_option("--curve", curve_path, "Curve key-value file")->required();
  ab->add_option("--delta", delta_s, "Support parameter Delta >= 1");
  ab->add_option("--ap-cache", ap_cache_path, "File of 'p a_p' lines");
  ab->add_option("--count-budget", count_budget, "Largest p whose a_p may be counted");

  // field-reduce
  bool trust_cofactor = false;
  auto* fr = app.add_subcommand("field-reduce", "Maximal order and Julia-reduced form of a cubic field");
  fr->add_option("--form", form_path, "Form key-value file");
  fr->add_option("--curve", curve_path, "Curve file; its 2-division cubic is used");
  fr->add_option("--factor-limit", factor_limit, "Trial-division limit for the discriminant");
  fr->add_flag("--trust-cofactor", trust_cofactor,
               "Treat an unfactored discriminant cofactor as prime to the index");
  fr->add_option("--output", output, "Write the reduced form here");

  // factor-base
  std::string bound_s;
  auto* fbc = app.add_subcommand("factor-base", "Degree-one primes of norm below a bound");
  fbc->add_option("--form", form_path, "Maximal form file")->required();
  fbc->add_option("--bound", bound_s, "Norm bound")->required();
  fbc->add_option("--output", output, "Factor-base file to write");
  add_threads(fbc);

  // sieve-plan
  std::vector<std::string> regions;
  bool table1_exact = false;
  std::string base_bits_s = "42.25";
  uint64_t alpha_cutoff = 2000;
  auto* sp = app.add_subcommand("sieve-plan", "Skewness, Murphy alpha and predicted relation yield");
  sp->add_option("--form", form_path, "Form file");
  sp->add_option("--bound", bound_s, "Smoothness bound");
  sp->add_option("--region", regions, "Region size(s) S = log2(2AB)")->required();
  sp->add_option("--base-bits", base_bits_s, "Inner region size of the yield model");
  sp->add_option("--alpha-cutoff", alpha_cutoff, "Prime cutoff for Murphy alpha");
  sp->add_flag("--table1-exact", table1_exact, "Use the published constants instead of computing them");

  // sieve-run
  int64_t A = 0, b_lo = 1, b_hi = 1;
  double threshold = 20;
  bool with_rational = false;
  std::vector<uint64_t> targeted;
  std::size_t targeted_count = 8;
  std::size_t memory_budget = std::size_t(1) << 30;
  auto* sr = app.add_subcommand("sieve-run", "Line sieve over a rectangle; appends to a relation file");
  sr->add_option("--factor-base", fb_path, "Factor-base file")->required();
  sr->add_option("--relations", rel_path, "Relation file (created or appended)")->required();
  sr->add_option("--A", A, "Half-width of the a interval")->required();
  sr->add_option("--b-lo", b_lo, "First b");
  sr->add_option("--b-hi", b_hi, "Last b");
  sr->add_option("--threshold", threshold, "Log slack in bits");
  sr->add_option("--memory-budget", memory_budget, "Bytes per worker");
  sr->add_flag("--rational", with_rational, "Also add relations (p) for fully split p");
  sr->add_option("--targeted", targeted, "Primes p for targeted lines b = p");
  sr->add_option("--targeted-count", targeted_count, "Relations per targeted prime");
  add_threads(sr);

  // classgroup-upper / classgroup-lower
  std::string protected_s;
  std::string matrix_out, cert_out;
  std::size_t aux_primes = 0, row_limit = 0;
  auto* cu = app.add_subcommand("classgroup-upper", "GRH upper bound on dim Cl(K)[2]");
  cu->add_option("--factor-base", fb_path, "Factor-base file")->required();
  cu->add_option("--relations", rel_path, "Relation file")->required();
  cu->add_option("--protected-bound", protected_s, "Generators needed below this norm (default: Bach bound)");
  cu->add_option("--matrix", matrix_out, "Write the relation matrix here");
  auto* cl = app.add_subcommand("classgroup-lower", "Certified lower bound on dim Cl(K)[2]");
  cl->add_option("--factor-base", fb_path, "Factor-base file")->required();
  cl->add_option("--relations", rel_path, "Relation file")->required();
  cl->add_option("--aux-primes", aux_primes, "Number of auxiliary primes (0 = default)");
  cl->add_option("--rows", row_limit, "Use only the first N relations (0 = all)");
  cl->add_option("--certificate", cert_out, "Write the certificate here");
  add_threads(cl);

  // rank-report
  std::string table_path;
  std::optional<int> g, u, n, eps, known;
  auto* rr = app.add_subcommand("rank-report", "Brumer-Kramer Selmer bound and the rank sandwich");
  rr->add_option("--table", table_path, "Lines 'r g u n eps' to print as table rows");
  rr->add_option("--curve", curve_path, "Curve file with bad_primes (and residual) for u and n");
  rr->add_option("--form", form_path, "Maximal form of the cubic subfield");
  rr->add_option("--g", g, "Bound on dim Cl(K)[2]");
  rr->add_option("--u", u, "u term, when not computed from a curve");
  rr->add_option("--n", n, "n term, when not computed from a curve");
  rr->add_option("--root-number", eps, "Global root number +1 or -1");
  rr->add_option("--known-rank", known, "Known lower bound on the rank");
  rr->add_option("--factor-limit", factor_limit, "Trial-division limit when the curve file has no bad_primes");

  std::vector<std::string> args;
  for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
  std::reverse(args.begin(), args.end());
  args = merge_config(args);
  std::reverse(args.begin(), args.end());  // CLI11 consumes the vector from the back
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  std::ostream& out = std::cout;

  if (*ca) {
    auto c = parse_curve_file(read_file(curve_path));
    auto inv = invariants(c.curve);
    out << "curve " << c.curve.a1 << " " << c.curve.a2 << " " << c.curve.a3 << " " << c.curve.a4 << " " << c.curve.a6
        << "\n";
    out << "c4 " << inv.c4 << "\nc6 " << inv.c6 << "\ndisc " << inv.disc << "\n";
    out << "disc_sign " << (inv.disc > 0 ? "+1" : "-1") << "\n";
    try {
      out << "two_division_cubic " << form_str(two_division_cubic(c.curve)) << "\n";
    } catch (const Error&) {
      out << "two_division_cubic rational-2-torsion\n";
    }
    auto pf = trial_factor_disc(inv.disc, factor_limit);
    std::vector<BigInt> bad;
    for (auto& [p, k] : pf.primes) bad.push_back(p);
    if (pf.cofactor != 1 && is_prime(pf.cofactor)) bad.push_back(pf.cofactor);
    out << "p type kodaira ord_disc f_p tamagawa\n";
    for (auto& p : bad) {
      auto ld = tate_local(c.curve, p);
      out << p << " " << to_string(ld.type) << " " << ld.kodaira << " " << ld.ord_p_disc << " "
          << ld.conductor_exponent << " " << ld.tamagawa << "\n";
    }
    if (pf.cofactor == 1 || is_prime(pf.cofactor)) {
      out << "conductor " << conductor(c.curve, bad) << "\n";
    } else {
      out << "unfactored_cofactor " << pf.cofactor << "\n";
    }
    return 0;
  }

  if (*ab) {
    auto c = parse_curve_file(read_file(curve_path));
    AnalyticBoundParams prm;
    prm.delta = Real(delta_s);
    prm.count_budget = count_budget;
    prm.root_number = c.root_number;
    if (c.conductor) {
      prm.conductor = *c.conductor;
    } else {
      std::vector<BigInt> bad = c.bad_primes;
      if (bad.empty()) {
        auto pf = trial_factor_disc(invariants(c.curve).disc, factor_limit);
        if (pf.cofactor != 1 && !is_prime(pf.cofactor))
          throw Error(ErrorKind::usage, "conductor unknown: discriminant not factored; give conductor or bad_primes");
        for (auto& [p, k] : pf.primes) bad.push_back(p);
        if (pf.cofactor != 1) bad.push_back(pf.cofactor);
      }
      prm.conductor = conductor(c.curve, bad);
    }
    ApCache cache;
    if (!ap_cache_path.empty()) {
      std::istringstream in(read_file(ap_cache_path));
      cache = read_ap_cache(in);
    }
    auto b = analytic_rank_bound(c.curve, prm, ap_cache_path.empty() ? nullptr : &cache);
    out << "delta " << delta_s << "\nconductor " << prm.conductor << "\ncutoff " << b.cutoff << "\n";
    out << "arithmetic " << fixed(b.arithmetic) << "\narchimedean " << fixed(b.archimedean) << "\nconductor_term "
        << fixed(b.conductor) << "\nraw_bound " << fixed(b.raw) << "\n";
    if (b.parity_refined) out << "parity_bound " << *b.parity_refined << "\n";
    return 0;
  }

  if (*fr) {
    Cubic f = load_form(form_path, curve_path);
    auto pf = trial_factor_disc(disc(f), factor_limit);
    CubicField k;
    if (pf.cofactor == 1 || is_prime(pf.cofactor)) {
      auto primes = pf.primes;
      if (pf.cofactor != 1) primes.push_back({pf.cofactor, valuation(disc(f), pf.cofactor)});
      k = maximalize(f, primes);
    } else if (trust_cofactor) {
      std::vector<BigInt> ps;
      for (auto& [p, e] : pf.primes) ps.push_back(p);
      k = maximalize_at(f, ps);
    } else {
      throw Error(ErrorKind::usage, "discriminant cofactor " + pf.cofactor.get_str() +
                                        " is composite; pass --trust-cofactor to treat it as prime to the index");
    }
    out << "form " << form_str(k.form) << "\ndisc " << k.disc << "\nsignature " << k.r1 << " " << k.r2
        << "\nbach_bound " << bach_bound(k) << "\n";
    if (!output.empty()) {
      write_file(output, "form = " + form_str(k.form) + "\n");
      KeyValues inputs;
      if (!form_path.empty()) inputs["form"] = form_path;
      if (!curve_path.empty()) inputs["curve"] = curve_path;
      write_log(output, "field-reduce", {{"factor_limit", std::to_string(factor_limit)}}, inputs);
    }
    return 0;
  }

  if (*fbc) {
    auto k = field_from_form(parse_form_file(read_file(form_path)));
    auto fb = build_factor_base(k, big(bound_s, "bound"), threads);
    const std::string text = format_factor_base(fb);
    out << "primes " << fb.primes.size() << "\nbound " << fb.bound << "\nsha256 " << sha256_hex(text) << "\n";
    if (!output.empty()) {
      write_file(output, text);
      write_log(output, "factor-base", {{"bound", bound_s}}, {{"form", form_path}});
    }
    return 0;
  }

  if (*sp) {
    std::optional<Cubic> f;
    if (!form_path.empty()) f = parse_form_file(read_file(form_path));
    if (!table1_exact && (!f || bound_s.empty()))
      throw Error(ErrorKind::usage, "sieve-plan needs --form and --bound unless --table1-exact");
    bool header = false;
    for (auto& s : regions) {
      const Real S(s);
      SievePlan plan = table1_exact ? table1_exact_plan(S)
                                    : self_plan(*f, big(bound_s, "bound"), S, Real(base_bits_s), alpha_cutoff);
      if (!header) {
        if (f) out << "log2_skew " << fixed(choose_skew_log2(*f), 4) << "\n";
        out << "alpha_bits " << fixed(nats_to_bits(plan.alpha), 4) << "\n";
        out << "base_norm_bits " << fixed(plan.base_norm_bits, 4) << "\n";
        out << "S A B predicted\n";
        header = true;
      }
      out << s << " " << plan.A << " " << plan.B << " " << std::llround(plan.predicted_relations.convert_to<double>()) << "\n";
    }
    return 0;
  }

  if (*sr) {
    auto base = load_base(fb_path);
    std::vector<Relation> rels;
    std::string existing;
    std::ifstream probe(rel_path);
    if (probe.good()) {
      existing = read_file(rel_path);
      rels = parse_relations(existing, base.hash, base.fb.primes.size());
    } else {
      existing = format_relations_header(base.hash);
    }
    std::vector<Relation> fresh;
    if (with_rational) {
      auto r = rational_relations(base.fb, base.fb.bound.get_ui());
      fresh.insert(fresh.end(), r.begin(), r.end());
    }
    SieveParams prm;
    prm.A = A;
    prm.b_lo = b_lo;
    prm.b_hi = b_hi;
    prm.threshold_bits = threshold;
    prm.memory_budget = memory_budget;
    prm.threads = threads;
    auto s = sieve_relations(base.fb, prm);
    fresh.insert(fresh.end(), s.begin(), s.end());
    for (auto p : targeted) {
      auto t = targeted_relations(base.fb, p, targeted_count);
      fresh.insert(fresh.end(), t.begin(), t.end());
    }
    // Append only pairs not already present.
    std::set<std::pair<BigInt, BigInt>> seen;
    for (auto& r : rels) seen.insert({r.a, r.b});
    std::size_t added = 0;
    for (auto& r : fresh)
      if (seen.insert({r.a, r.b}).second) {
        existing += format_relation_line(r);
        ++added;
      }
    write_file(rel_path, existing);
    write_log(rel_path, "sieve-run",
              {{"A", std::to_string(A)}, {"b_lo", std::to_string(b_lo)}, {"b_hi", std::to_string(b_hi)}},
              {{"factor_base", fb_path}});
    out << "appended " << added << "\ntotal " << rels.size() + added << "\n";
    return 0;
  }

  if (*cu) {
    auto base = load_base(fb_path);
    const std::string rtext = read_file(rel_path);
    auto rels = parse_relations(rtext, base.hash, base.fb.primes.size());
    const BigInt prot = protected_s.empty() ? bach_bound(base.fb.field) : big(protected_s, "protected-bound");
    if (prot >= base.fb.bound)
      throw Error(ErrorKind::usage, "protected bound must lie below the factor-base bound");
    if (!matrix_out.empty()) {
      write_file(matrix_out, format_matrix(relation_matrix(base.fb, rels), base.hash));
      write_log(matrix_out, "classgroup-upper", {}, {{"factor_base", fb_path}, {"relations", rel_path}});
    }
    auto ub = upper_bound_2rank(base.fb, rels, prot);
    out << "relations " << rels.size() << "\nprotected_bound " << prot << "\nremoved_columns " << ub.removed_columns
        << "\nremoved_rows " << ub.removed_rows << "\nmatrix " << ub.rows << " x " << ub.columns << "\nupper_2rank "
        << ub.two_rank << "\nconditional GRH\n";
    return 0;
  }

  if (*cl) {
    auto base = load_base(fb_path);
    const std::string rtext = read_file(rel_path);
    auto rels = parse_relations(rtext, base.hash, base.fb.primes.size());
    auto lb = selmer_lower_bound(base.fb, rels, aux_primes, row_limit, threads);
    if (!cert_out.empty()) {
      write_file(cert_out, format_certificate(lb.certificate, sha256_hex(rtext)));
      write_log(cert_out, "classgroup-lower", {{"aux_primes", std::to_string(aux_primes)}},
                {{"factor_base", fb_path}, {"relations", rel_path}});
    }
    out << "candidates " << lb.candidates << "\naux_primes " << lb.certificate.primes.size() << "\nskipped "
        << lb.skipped << "\nselmer_rank " << lb.selmer_rank << "\nunit_rank_plus_torsion "
        << base.fb.field.r1 + base.fb.field.r2 << "\nlower_2rank " << lb.two_rank << "\n";
    return 0;
  }

  if (*rr) {
    if (!table_path.empty()) {
      std::istringstream in(read_file(table_path));
      out << "r g u n eps sel\n";
      for (std::string line; std::getline(in, line);) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        int r;
        BKTerms t;
        int e;
        if (!(ls >> r >> t.g >> t.u >> t.n >> e) || (e != 1 && e != -1))
          throw Error(ErrorKind::data, "rank-report: malformed table line '" + line + "'");
        t.root_number = e;
        out << table_row(r, t) << "\n";
      }
      return 0;
    }
    if (!g) throw Error(ErrorKind::usage, "rank-report needs --g (or --table)");
    BKTerms t;
    if (!curve_path.empty()) {
      auto c = parse_curve_file(read_file(curve_path));
      if (form_path.empty()) throw Error(ErrorKind::usage, "rank-report --curve needs --form for the cubic field");
      // Without a bad-prime list, trial division supplies the local data and
      // the cofactor is asserted to divide the discriminant exactly once.
      BigInt residual = c.residual;
      std::vector<BigInt> bad = c.bad_primes;
      if (bad.empty()) {
        auto pf = trial_factor_disc(invariants(c.curve).disc, factor_limit);
        for (auto& [p, k] : pf.primes) bad.push_back(p);
        residual = pf.cofactor;
      }
      std::vector<LocalReductionData> local;
      for (auto& p : bad) local.push_back(tate_local(c.curve, p));
      t = compute_bk_terms(c.curve, local, field_from_form(parse_form_file(read_file(form_path))), *g, residual);
      if (residual != 1) out << "residual " << residual << "\n";
      t.root_number = c.root_number;
      if (c.known_rank) t.known_rank_lower = c.known_rank;
      out << "phi_m";
      for (auto& p : t.phi_m) out << " " << p;
      out << "\nphi_a";
      for (auto& [p, np] : t.phi_a) out << " " << p << ":" << np;
      out << "\n";
    } else {
      if (!u || !n) throw Error(ErrorKind::usage, "rank-report needs --u and --n, or --curve and --form");
      t.g = *g;
      t.u = *u;
      t.n = *n;
    }
    if (eps) t.root_number = *eps;
    if (known) t.known_rank_lower = *known;
    out << "g " << t.g << "\nu " << t.u << "\nn " << t.n << "\n" << rank_report(t).text;
    return 0;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::usage: return 1;
      case ErrorKind::budget: return 3;
      case ErrorKind::data:
      case ErrorKind::math: return 2;
    }
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
