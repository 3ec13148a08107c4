#include "eaforge/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "eaforge/catalog.hpp"
#include "eaforge/ccz.hpp"
#include "eaforge/ea_recovery.hpp"
#include "eaforge/function_file.hpp"
#include "eaforge/invariants.hpp"
#include "eaforge/jacobian.hpp"
#include "eaforge/parallel.hpp"

namespace eaforge {

namespace {

using json = nlohmann::ordered_json;

json spectrum_json(const Spectrum& s) {
  json j = json::object();
  for (const auto& [v, c] : s.entries()) j[std::to_string(v)] = c;
  return j;
}

std::string hex(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << v;
  return os.str();
}

json matrix_json(const BitMatrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) rows.push_back(hex(m.row_word(r)));
  return rows;
}

void emit(std::ostream& out, const json& j) { out << j.dump() << '\n'; }

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

unsigned gcd_u(unsigned a, unsigned b) { return std::gcd(a, b); }

struct Options {
  std::optional<unsigned> jobs;
  std::string file, file_g, use;
  std::optional<unsigned> s;
  unsigned threshold = 10;
  bool exhaustive = false, seedless = false, force = false, brute = false, apn_only = false;
  unsigned k = 4, n = 0, m = 0;
  std::size_t count = 1;
  std::uint64_t seed = 0;
};

int cmd_spectra(const Options& o, std::ostream& out) {
  const auto fns = parse_function_file(o.file);
  const auto rows = parallel_map(fns.size(), resolve_jobs(o.jobs), [&](std::size_t i) {
    const Vbf& f = fns[i];
    json j;
    j["n"] = f.n();
    j["m"] = f.m();
    j["degree"] = degree(f);
    j["differential_spectrum"] = spectrum_json(differential_spectrum(f));
    j["differential_uniformity"] = differential_uniformity(f);
    j["extended_walsh_spectrum"] = spectrum_json(extended_walsh_spectrum(f));
    j["linearity"] = linearity(f);
    j["apn"] = f.m() >= f.n() ? json(is_apn(f)) : json(nullptr);
    j["permutation"] = is_permutation(f);
    return j;
  });
  for (const auto& j : rows) emit(out, j);
  return kExitOk;
}

int cmd_ranktable(const Options& o, std::ostream& out) {
  for (const auto& f : parse_function_file(o.file)) {
    const auto d = rank_distribution(rank_table(LinearJacobian(f)));
    emit(out, json{{"rank_distribution", d.counts}});
  }
  return kExitOk;
}

int cmd_ortho(const Options& o, std::ostream& out) {
  const auto fns = parse_function_file(o.file);
  const auto rows = parallel_map(fns.size(), resolve_jobs(o.jobs), [&](std::size_t i) {
    const auto pi = ortho_derivative(fns[i]).pi;
    const InvariantLabel label{differential_spectrum(pi), extended_walsh_spectrum(pi)};
    return json{{"label", label.serialize()}, {"ortho_degree", degree(pi)}};
  });
  for (const auto& j : rows) emit(out, j);
  return kExitOk;
}

int cmd_partition(const Options& o, std::ostream& out) {
  const auto p = eaforge::partition(parse_function_file(o.file), split_commas(o.use), resolve_jobs(o.jobs));
  for (const auto& b : p.buckets) emit(out, json{{"label", b.label}, {"members", b.members}});
  return kExitOk;
}

int cmd_recover(const Options& o, std::ostream& out) {
  const auto fs = parse_function_file(o.file);
  const auto gs = parse_function_file(o.file_g);
  if (fs.empty() || gs.empty()) throw std::invalid_argument("ea-recover needs at least one function per file");
  if (fs.size() != 1 && fs.size() != gs.size())
    throw std::invalid_argument("ea-recover: files must hold equally many functions, or F a single one");
  RecoveryConfig cfg;
  cfg.s = o.s;
  cfg.threshold = o.threshold;
  cfg.exhaustive = o.exhaustive;
  cfg.jobs = resolve_jobs(o.jobs);
  bool any_unfound = false, any_inequivalent = false;
  for (std::size_t i = 0; i < gs.size(); ++i) {
    const Vbf& f = fs.size() == 1 ? fs[0] : fs[i];
    const auto verdict = recover(f, gs[i], cfg);
    json j;
    auto diag = [](const RecoveryDiagnostics& d) {
      return json{{"guesses", d.guesses},
                  {"inconsistent", d.inconsistent},
                  {"threshold_exceeded", d.threshold_exceeded},
                  {"candidates", d.candidates}};
    };
    if (const auto* e = std::get_if<Equivalent>(&verdict)) {
      j["verdict"] = "EQUIVALENT";
      j["tuple"] = json{{"A0", matrix_json(e->tuple.a0)},
                        {"B0", matrix_json(e->tuple.b0)},
                        {"C0", matrix_json(e->tuple.c0)},
                        {"a", hex(e->tuple.a.to_uint())}};
      j["diagnostics"] = diag(e->diagnostics);
    } else if (std::holds_alternative<NotEquivalent>(verdict)) {
      j["verdict"] = "NOT EQUIVALENT";
      any_inequivalent = true;
    } else {
      j["verdict"] = "NO EQUIVALENCE FOUND";
      j["diagnostics"] = diag(std::get<NoEquivalenceFound>(verdict).diagnostics);
      any_unfound = true;
    }
    emit(out, j);
  }
  if (any_unfound) return kExitNoEquivalenceFound;
  if (any_inequivalent) return kExitNotEquivalent;
  return kExitOk;
}

int cmd_spaces(const Options& o, std::ostream& out) {
  const unsigned jobs = resolve_jobs(o.jobs);
  for (const auto& f : parse_function_file(o.file)) {
    const auto spaces = dim_n_spaces(walsh_zeroes(f), jobs);
    const auto t = thickness_spectrum(spaces, f.n(), f.m());
    emit(out, json{{"count", spaces.size()}, {"thickness", spectrum_json(t.as_spectrum())}});
  }
  return kExitOk;
}

int cmd_ccz_expand(const Options& o, std::ostream& out) {
  const unsigned jobs = resolve_jobs(o.jobs);
  for (const auto& f : parse_function_file(o.file)) {
    const auto b = ea_class_bounds(f, jobs);
    json report = json::array();
    for (const auto& e : b.report)
      report.push_back(
          json{{"thickness", spectrum_json(e.thickness.as_spectrum())}, {"degree", e.degree}, {"count", e.count}});
    emit(out, json{{"lower", b.lower}, {"upper", b.upper}, {"report", report}});
  }
  return kExitOk;
}

int cmd_gamma_delta(const Options& o, std::ostream& out) {
  for (const auto& f : parse_function_file(o.file))
    emit(out, json{{"gamma_rank", gamma_rank(f, o.force)}, {"delta_rank", delta_rank(f, o.force)}});
  return kExitOk;
}

int cmd_sigma(const Options& o, std::ostream& out) {
  const auto fns = parse_function_file(o.file);
  const auto rows = parallel_map(fns.size(), resolve_jobs(o.jobs), [&](std::size_t i) {
    const auto s = o.brute ? sigma_multiplicities_bruteforce(fns[i], o.k) : sigma_multiplicities(fns[i], o.k);
    return json{{"k", o.k}, {"multiplicities", spectrum_json(s)}};
  });
  for (const auto& j : rows) emit(out, j);
  return kExitOk;
}

int cmd_gen(const Options& o, std::ostream& out) {
  if (o.n < 1 || o.n > kMaxInputBits || o.m < 1 || o.m > kMaxOutputBits)
    throw std::invalid_argument("gen-quadratic: dimensions out of range");
  std::mt19937_64 rng(o.seed);
  if (!o.apn_only) {
    for (std::size_t c = 0; c < o.count; ++c) out << format_truth_table(random_quadratic(o.n, o.m, rng)) << '\n';
    return kExitOk;
  }
  if (o.n != o.m) throw std::invalid_argument("gen-quadratic --apn-only needs n = m");
  if (o.n < 3) throw std::invalid_argument("gen-quadratic --apn-only needs n >= 3");
  // Random EA images of known quadratic APN functions.
  std::vector<Vbf> seeds;
  if (o.n == 6) seeds = banff_functions();
  for (unsigned i = 1; i < o.n; ++i)
    if (gcd_u(i, o.n) == 1) seeds.push_back(gold_function(o.n, i));
  for (std::size_t c = 0; c < o.count; ++c) {
    const Vbf& base = seeds[rng() % seeds.size()];
    out << format_truth_table(compose_ea(base, random_ea_tuple(o.n, o.n, rng))) << '\n';
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"EA-equivalence recovery and invariants for quadratic vectorial Boolean functions", "eaforge"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--jobs", o.jobs, "worker threads (default: EAFORGE_JOBS or all cores)")->check(CLI::PositiveNumber);

  auto file_cmd = [&](const char* name, const char* help) {
    auto* c = app.add_subcommand(name, help);
    c->add_option("file", o.file, "function file")->required();
    return c;
  };
  auto* spectra = file_cmd("spectra", "degree, differential and Walsh spectra, APN and permutation flags");
  auto* ranktable = file_cmd("ranktable", "Jacobian rank distribution");
  auto* ortho = file_cmd("ortho", "ortho-derivative label");
  auto* part = file_cmd("partition", "bucket functions by invariant labels");
  part->add_option("--use", o.use, "comma-separated invariants")->required();
  auto* rec = app.add_subcommand("ea-recover", "recover an EA tuple G = A0 F(B0 x) + C0 x + a");
  rec->add_option("fileF", o.file, "function file for F")->required();
  rec->add_option("fileG", o.file_g, "function file for G")->required();
  rec->add_option("--s", o.s, "simultaneous guesses")->check(CLI::PositiveNumber);
  rec->add_option("--threshold", o.threshold, "largest solution-space dimension to enumerate");
  rec->add_flag("--exhaustive", o.exhaustive, "refine over-threshold guesses with further references");
  rec->add_flag("--seedless", o.seedless, "accepted for compatibility; recovery is deterministic");
  auto* spaces = file_cmd("spaces", "dimension-n spaces in the Walsh zeroes");
  auto* ccz = file_cmd("ccz-expand", "EA-class bounds within the CCZ class");
  auto* gd = file_cmd("gamma-delta", "Gamma-rank and Delta-rank");
  gd->add_flag("--force", o.force, "lift the size cap");
  auto* sigma = file_cmd("sigma", "Sigma-k multiplicities");
  sigma->add_option("--k", o.k, "even subset size above 2")->required();
  sigma->add_flag("--brute-force", o.brute, "direct subset enumeration");
  auto* gen = app.add_subcommand("gen-quadratic", "emit random quadratic functions as T records");
  gen->add_option("--n", o.n, "input bits")->required();
  gen->add_option("--m", o.m, "output bits")->required();
  gen->add_option("--count", o.count, "number of functions")->required();
  gen->add_option("--seed", o.seed, "RNG seed")->required();
  gen->add_flag("--apn-only", o.apn_only, "random EA images of known APN functions");

  std::vector<std::string> argv_store;
  argv_store.push_back("eaforge");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "eaforge: " << e.what() << '\n';
    return kExitError;
  }

  try {
    if (spectra->parsed()) return cmd_spectra(o, out);
    if (ranktable->parsed()) return cmd_ranktable(o, out);
    if (ortho->parsed()) return cmd_ortho(o, out);
    if (part->parsed()) return cmd_partition(o, out);
    if (rec->parsed()) return cmd_recover(o, out);
    if (spaces->parsed()) return cmd_spaces(o, out);
    if (ccz->parsed()) return cmd_ccz_expand(o, out);
    if (gd->parsed()) return cmd_gamma_delta(o, out);
    if (sigma->parsed()) return cmd_sigma(o, out);
    if (gen->parsed()) return cmd_gen(o, out);
  } catch (const std::exception& e) {
    err << "eaforge: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace eaforge
