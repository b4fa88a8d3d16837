// Command-line driver: nilpotency scans, graded dimensions, monomial bases,
// generator listings, the identity battery, the reference-construction
// cross-check, and resumption from saved state.
//
// Exit codes: 0 success, 1 a verification failed (identity battery or
// reference comparison), 2 stopped early (degree cap, budget, interrupt),
// 3 invalid input.

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "nilcrunch/report.hpp"

namespace {

using namespace nilcrunch;

struct Opts {
  std::uint32_t n = 0, d = 0;
  std::string field = "q2";
  std::uint32_t q = 0;
  std::uint32_t dmax = 0;        // 0 = pick a default from (n, d, field)
  std::uint32_t degree = 0;      // 0 = scan for the nilpotency degree first
  std::uint32_t arg_degree = 0;
  std::uint32_t nmax = 6;
  std::string out;               // json, csv, or text
  std::string checkpoint;
  unsigned jobs = 1;
  std::uint64_t budget_mb = 2048;
  std::uint64_t wall_ms = 0;
  std::uint64_t max_coords = 1'000'000;
};

using Clock = std::chrono::steady_clock;

std::uint64_t ms_since(Clock::time_point t0) {
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0)
          .count());
}

// explicit flag wins; otherwise NILCRUNCH_CHECKPOINT_DIR names a directory
// for an automatically named file; otherwise no state is saved
std::string resolve_checkpoint(const Opts& o, const std::string& command,
                               const FieldSpec& f) {
  if (!o.checkpoint.empty()) return o.checkpoint;
  const char* dir = std::getenv("NILCRUNCH_CHECKPOINT_DIR");
  if (!dir || !*dir) return {};
  std::filesystem::create_directories(dir);
  std::ostringstream name;
  name << command << "-n" << o.n << "-d" << o.d << "-" << f.text() << ".ckpt";
  return (std::filesystem::path(dir) / name.str()).string();
}

BuildOptions make_build_options(const Opts& o, const std::string& command,
                                const FieldSpec& f, std::uint32_t dmax,
                                std::uint32_t query_degree) {
  BuildOptions b;
  b.jobs = o.jobs;
  b.checkpoint_path = resolve_checkpoint(o, command, f);
  b.budget.max_row_mb = o.budget_mb;
  b.budget.wall_ms = o.wall_ms;
  b.budget.max_coords = o.max_coords;
  b.header.command = command;
  b.header.dmax = dmax;
  b.header.query_degree = query_degree;
  return b;
}

void emit_json(const Json& j) { std::cout << j.dump(2) << "\n"; }

// subcommands share one Opts, so per-command defaults resolve at use
std::string out_or(const Opts& o, const char* dflt) {
  return o.out.empty() ? dflt : o.out;
}

void emit_dims_csv(const Json& j) {
  std::cout << "degree,dimension\n";
  if (!j.contains("graded_dims")) return;  // stopped before any build done
  std::uint32_t k = 1;
  for (const auto& v : j.at("graded_dims"))
    std::cout << k++ << "," << v.get<std::uint64_t>() << "\n";
}

void emit_nilpotency(const Json& j, const std::string& out) {
  if (out == "json") return emit_json(j);
  if (out == "csv") return emit_dims_csv(j);
  std::cout << "n=" << j.at("n").get<std::uint32_t>()
            << " d=" << j.at("d").get<std::uint32_t>()
            << " field=" << j.at("field").get<std::string>() << "\n";
  if (j.at("reached").get<bool>()) {
    std::cout << "nilpotency degree " << j.at("degree").get<std::uint32_t>()
              << " (" << j.at("certificate").get<std::string>()
              << " certificate)\n";
    if (j.contains("graded_dims")) {
      std::cout << "graded dims:";
      for (const auto& v : j.at("graded_dims"))
        std::cout << " " << v.get<std::uint64_t>();
      std::cout << "  total " << j.at("dim_total").get<std::uint64_t>()
                << "\n";
    }
  } else {
    std::cout << "not reached by degree "
              << j.at("dmax").get<std::uint32_t>() << "\n";
  }
}

int run_nilpotency(const Opts& o) {
  const auto t0 = Clock::now();
  const FieldSpec f = FieldSpec::parse(o.field);
  const std::uint32_t dmax = o.dmax ? o.dmax : default_dmax(o.n, o.d, f);
  auto b = make_build_options(o, "nilpotency", f, dmax, 0);
  const auto r = nilpotency_degree(o.n, o.d, f, dmax, b);
  emit_nilpotency(nilpotency_report(r, ms_since(t0)), out_or(o, "json"));
  return r.reached ? 0 : 2;
}

// scan unless a truncation degree was given explicitly
std::pair<AnyRelSpace, std::uint32_t> space_for_query(const Opts& o,
                                                      const std::string& cmd,
                                                      const FieldSpec& f) {
  if (o.degree > 0) {
    auto b = make_build_options(o, cmd, f, 0, o.degree);
    AnyRelSpace s =
        make_relation_space(o.n, o.d, f, o.degree, scheme_for(f),
                            SeedMode::generators, b);
    build(s);
    return {std::move(s), o.degree};
  }
  const std::uint32_t dmax = o.dmax ? o.dmax : default_dmax(o.n, o.d, f);
  auto b = make_build_options(o, cmd, f, dmax, 0);
  auto r = nilpotency_degree(o.n, o.d, f, dmax, b);
  if (!r.reached || !r.space)
    throw BudgetExceeded("nilpotency degree not reached by the degree cap",
                         false, "");
  return {std::move(*r.space), r.degree - 1};
}

int run_dims(const Opts& o) {
  const auto t0 = Clock::now();
  const FieldSpec f = FieldSpec::parse(o.field);
  auto [s, kmax] = space_for_query(o, "dims", f);
  const Json j = dims_report(o.n, o.d, f, s, kmax, ms_since(t0));
  if (o.out == "json")
    emit_json(j);
  else if (o.out == "text") {
    std::uint32_t k = 1;
    for (const auto& v : j.at("graded_dims"))
      std::cout << "degree " << k++ << ": " << v.get<std::uint64_t>() << "\n";
    std::cout << "total " << j.at("dim_total").get<std::uint64_t>() << "\n";
  } else
    emit_dims_csv(j);
  return 0;
}

int run_basis(const Opts& o) {
  const auto t0 = Clock::now();
  const FieldSpec f = FieldSpec::parse(o.field);
  auto [s, kmax] = space_for_query(o, "basis", f);
  const Json j = basis_report(o.n, o.d, f, s, kmax, ms_since(t0));
  if (o.out == "json")
    emit_json(j);
  else if (o.out == "csv") {
    std::cout << "word\n";
    for (const auto& w : j.at("words"))
      std::cout << w.get<std::string>() << "\n";
  } else {
    for (const auto& w : j.at("words"))
      std::cout << w.get<std::string>() << "\n";
  }
  return 0;
}

int run_generators(const Opts& o) {
  const FieldSpec f = FieldSpec::parse(o.field);
  const auto gens = generator_set(o.n, f);
  const Json j = generators_report(o.n, f, gens);
  if (o.out == "json")
    emit_json(j);
  else if (o.out == "csv") {
    std::cout << "arity,terms,text\n";
    for (const auto& g : gens)
      std::cout << g.arity << "," << g.parts.size() << ",\"" << g.text()
                << "\"\n";
  } else {
    for (const auto& g : gens)
      std::cout << g.text() << "  [arity " << g.arity << ", terms "
                << g.parts.size() << "]\n";
  }
  return 0;
}

int run_verify(const Opts& o) {
  const auto t0 = Clock::now();
  const auto checks = run_identity_suite(o.nmax);
  const Json j = verify_report(o.nmax, checks, ms_since(t0));
  const std::string out = out_or(o, "json");
  if (out == "json")
    emit_json(j);
  else if (out == "csv") {
    std::cout << "name,n,modulus,expect_zero,zero,passed\n";
    for (const auto& c : checks)
      std::cout << c.name << "," << c.n << "," << c.modulus << ","
                << c.expect_zero << "," << c.zero << "," << c.passed << "\n";
  } else {
    for (const auto& c : checks) {
      std::cout << (c.passed ? "PASS" : "FAIL") << " " << c.name
                << " (n=" << c.n << ", mod " << c.modulus << ")";
      if (!c.witness.empty()) std::cout << "  witness " << c.witness;
      std::cout << "\n";
    }
    std::cout << checks.size() << " checks\n";
  }
  return all_passed(checks) ? 0 : 1;
}

int run_oracle_compare(const Opts& o) {
  const auto t0 = Clock::now();
  const FieldSpec f = FieldSpec::finite(o.q);
  BuildOptions b = make_build_options(o, "oracle-compare", f, 0, o.degree);
  b.checkpoint_path.clear();  // two engines, one path would clobber
  auto reference =
      oracle_relation_space(o.n, o.d, o.q, o.degree, o.arg_degree, b);
  b.max_arg_degree = o.arg_degree;
  AnyRelSpace direct = make_relation_space(
      o.n, o.d, f, o.degree, scheme_for(f), SeedMode::generators, b);
  build(direct);
  const bool match = flatten(reference) == flatten(direct);
  const Json j =
      oracle_report(o.n, o.d, o.q, o.degree, o.arg_degree,
                    total_rank(reference), total_rank(direct), match,
                    ms_since(t0));
  if (out_or(o, "json") == "json")
    emit_json(j);
  else
    std::cout << (match ? "match" : "MISMATCH") << ": reference rank "
              << total_rank(reference) << ", generator rank "
              << total_rank(direct) << "\n";
  return match ? 0 : 1;
}

int run_resume(const Opts& o) {
  const auto t0 = Clock::now();
  const std::string out = out_or(o, "json");
  BuildOptions b;
  b.jobs = o.jobs;
  b.checkpoint_path = o.checkpoint;
  b.budget.max_row_mb = o.budget_mb;
  b.budget.wall_ms = o.wall_ms;
  b.budget.max_coords = o.max_coords;
  CheckpointHeader h;
  AnyRelSpace s = load_checkpoint(o.checkpoint, b, &h);
  build(s);  // finish whatever the saved build had left
  if (h.command == "nilpotency" ||
      ((h.command == "dims" || h.command == "basis") &&
       h.query_degree == 0)) {
    std::vector<std::pair<std::uint32_t, bool>> prior;
    for (const auto& [deg, full] : h.observations)
      prior.emplace_back(deg, full != 0);
    b.header = h;
    auto r = nilpotency_degree(
        h.n, h.d, h.field, h.dmax, b,
        std::make_pair(h.trunc_degree, std::move(s)), prior);
    if (h.command == "nilpotency") {
      emit_nilpotency(nilpotency_report(r, ms_since(t0)), out);
      return r.reached ? 0 : 2;
    }
    if (!r.reached || !r.space)
      throw BudgetExceeded("nilpotency degree not reached by the degree cap",
                           false, "");
    Opts oo = o;
    oo.n = h.n;
    oo.d = h.d;
    const Json j =
        h.command == "dims"
            ? dims_report(h.n, h.d, h.field, *r.space, r.degree - 1,
                          ms_since(t0))
            : basis_report(h.n, h.d, h.field, *r.space, r.degree - 1,
                           ms_since(t0));
    if (out == "json")
      emit_json(j);
    else if (h.command == "dims")
      emit_dims_csv(j);
    else
      for (const auto& w : j.at("words"))
        std::cout << w.get<std::string>() << "\n";
    return 0;
  }
  if (h.command == "dims") {
    const Json j =
        dims_report(h.n, h.d, h.field, s, h.query_degree, ms_since(t0));
    if (out == "json")
      emit_json(j);
    else
      emit_dims_csv(j);
    return 0;
  }
  if (h.command == "basis") {
    const Json j =
        basis_report(h.n, h.d, h.field, s, h.query_degree, ms_since(t0));
    if (out == "json")
      emit_json(j);
    else
      for (const auto& w : j.at("words"))
        std::cout << w.get<std::string>() << "\n";
    return 0;
  }
  throw std::invalid_argument("checkpoint command '" + h.command +
                              "' cannot be resumed");
}

void add_budget_flags(CLI::App* c, Opts& o) {
  c->add_option("--jobs", o.jobs, "worker threads for seed expansion");
  c->add_option("--budget-mb", o.budget_mb,
                "resident row-storage budget in MiB");
  c->add_option("--wall-ms", o.wall_ms, "wall-clock budget, 0 = unlimited");
  c->add_option("--max-coords", o.max_coords,
                "cap on tracked words across all blocks");
  c->add_option("--checkpoint", o.checkpoint, "state file to save into");
}

}  // namespace

int main(int argc, char** argv) {
  std::signal(SIGINT, [](int) { nilcrunch::g_interrupt.store(true); });

  CLI::App app{
      "exact relation spaces for relatively free algebras of bounded index"};
  app.require_subcommand(1);
  Opts o;

  auto* nil = app.add_subcommand(
      "nilpotency", "least degree whose words all fall in the relation span");
  nil->add_option("--n", o.n, "index bound (the power that vanishes)")
      ->required();
  nil->add_option("--d", o.d, "number of letters")->required();
  nil->add_option("--field", o.field, "q<k> or inf<p>, e.g. q2, q4, inf0");
  nil->add_option("--dmax", o.dmax, "degree cap, 0 = automatic");
  nil->add_option("--out", o.out, "json, csv, or text (default json)");
  add_budget_flags(nil, o);

  auto* dims = app.add_subcommand(
      "dims", "graded dimensions of the quotient along the degree filtration");
  dims->add_option("--n", o.n, "index bound")->required();
  dims->add_option("--d", o.d, "number of letters")->required();
  dims->add_option("--field", o.field, "q<k> or inf<p>");
  dims->add_option("--degree", o.degree,
                   "truncation degree, 0 = scan to the nilpotency degree");
  dims->add_option("--dmax", o.dmax, "degree cap for the scan");
  dims->add_option("--out", o.out, "csv, json, or text (default csv)");
  add_budget_flags(dims, o);

  auto* basis = app.add_subcommand(
      "basis", "monomial basis of the quotient: words outside the span");
  basis->add_option("--n", o.n, "index bound")->required();
  basis->add_option("--d", o.d, "number of letters")->required();
  basis->add_option("--field", o.field, "q<k> or inf<p>");
  basis->add_option("--degree", o.degree,
                    "truncation degree, 0 = scan to the nilpotency degree");
  basis->add_option("--dmax", o.dmax, "degree cap for the scan");
  basis->add_option("--out", o.out, "text, csv, or json (default text)");
  add_budget_flags(basis, o);

  auto* gens = app.add_subcommand(
      "generators", "substitution family generating the relation span");
  gens->add_option("--n", o.n, "index bound")->required();
  gens->add_option("--field", o.field, "q<k> or inf<p>");
  gens->add_option("--out", o.out, "text, csv, or json (default text)");

  auto* verify = app.add_subcommand(
      "verify", "run the built-in battery of linearization identities");
  verify->add_option("--nmax", o.nmax, "largest power to exercise");
  verify->add_option("--out", o.out, "json, csv, or text (default json)");

  auto* oracle = app.add_subcommand(
      "oracle-compare",
      "compare the generator construction against direct power spans");
  oracle->add_option("--n", o.n, "index bound")->required();
  oracle->add_option("--d", o.d, "number of letters")->required();
  oracle->add_option("--q", o.q, "field size (2 or 3)")->required();
  oracle->add_option("--degree", o.degree, "truncation degree")->required();
  oracle->add_option("--arg-degree", o.arg_degree,
                     "largest argument word degree")
      ->required();
  oracle->add_option("--out", o.out, "json or text (default json)");
  oracle->add_option("--jobs", o.jobs, "worker threads for seed expansion");

  auto* resume = app.add_subcommand(
      "resume", "pick a saved build back up and finish its command");
  resume->add_option("--checkpoint", o.checkpoint, "state file to load")
      ->required();
  resume->add_option("--out", o.out, "json, csv, or text (default json)");
  resume->add_option("--jobs", o.jobs, "worker threads for seed expansion");
  resume->add_option("--budget-mb", o.budget_mb,
                     "resident row-storage budget in MiB");
  resume->add_option("--wall-ms", o.wall_ms,
                     "wall-clock budget, 0 = unlimited");
  resume->add_option("--max-coords", o.max_coords,
                     "cap on tracked words across all blocks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 3;
  }

  try {
    if (nil->parsed()) return run_nilpotency(o);
    if (dims->parsed()) return run_dims(o);
    if (basis->parsed()) return run_basis(o);
    if (gens->parsed()) return run_generators(o);
    if (verify->parsed()) return run_verify(o);
    if (oracle->parsed()) return run_oracle_compare(o);
    if (resume->parsed()) return run_resume(o);
  } catch (const nilcrunch::Interrupted& e) {
    std::cerr << "interrupted" << (e.saved ? ", state saved to " + e.path : "")
              << "\n";
    return 2;
  } catch (const nilcrunch::BudgetExceeded& e) {
    std::cerr << "stopped: " << e.what()
              << (e.saved ? ", state saved to " + e.path : "") << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
