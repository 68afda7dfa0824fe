#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "kitaev/covariance_dynamics.hpp"
#include "kitaev/liouville.hpp"
#include "kitaev/model_core.hpp"
#include "kitaev/momentum_space.hpp"
#include "kitaev/third_quantization.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace kitaev;

namespace {

// ---------------------------------------------------------------- helpers

double parse_real(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw CLI::ValidationError("not a real number: '" + s + "'");
  return v;
}

/// Complex literals: "a", "bi", "a+bi", "a-bi", "i", "-i", "1+i", ...
Complex parse_complex(std::string s) {
  std::erase(s, ' ');
  if (s.empty()) throw CLI::ValidationError("empty complex literal");
  if (s.back() != 'i' && s.back() != 'I') return {parse_real(s), 0.0};
  s.pop_back();
  // split before the sign that starts the imaginary part (not an exponent
  // sign and not the leading sign)
  std::size_t split = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  auto unit_or_value = [](const std::string& part) {
    if (part.empty() || part == "+") return 1.0;
    if (part == "-") return -1.0;
    return parse_real(part);
  };
  if (split == std::string::npos) return {0.0, unit_or_value(s)};
  return {parse_real(s.substr(0, split)), unit_or_value(s.substr(split))};
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

void atomic_write(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out << content;
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stoi(item));
  }
  if (out.empty()) throw CLI::ValidationError("empty integer list");
  return out;
}

// ------------------------------------------------------------ run context

struct CommonOptions {
  int n = 4;
  std::string w = "1";
  std::string delta = "i";
  double mu = 0.0;
  double gamma = 1.0;
  std::string jump_delta = "1";
  std::string out_dir = ".";
  std::vector<std::uint64_t> seeds{1};
  double class_tol = 1e-9;

  ChainParams params() const {
    ChainParams p;
    p.n_sites = n;
    p.hopping = parse_complex(w);
    p.pairing = parse_complex(delta);
    p.chemical_potential = mu;
    p.dissipation_rate = gamma;
    p.jump_asymmetry = parse_complex(jump_delta);
    p.validate();
    return p;
  }

  json to_json() const {
    json j;
    j["n"] = n;
    j["w"] = w;
    j["delta"] = delta;
    j["mu"] = mu;
    j["gamma"] = gamma;
    j["jump_delta"] = jump_delta;
    return j;
  }
};

/// Collects emitted files and writes the closing manifest.
class RunRecorder {
 public:
  RunRecorder(const CommonOptions& common, std::string command,
              std::vector<std::string> argv)
      : dir_(common.out_dir), command_(std::move(command)) {
    fs::create_directories(dir_);
    manifest_["command"] = command_;
    manifest_["argv"] = std::move(argv);
    manifest_["parameters"] = common.to_json();
    manifest_["seeds"] = common.seeds;
    manifest_["timestamp"] = utc_timestamp();
    manifest_["outputs"] = json::array();
  }

  void emit(const std::string& name, const std::string& content) {
    atomic_write(dir_ / name, content);
    manifest_["outputs"].push_back(
        {{"path", name}, {"fnv1a64", hex64(fnv1a64(content))}});
  }

  void note(const std::string& key, const json& value) {
    manifest_[key] = value;
  }

  fs::path finish() {
    const fs::path path = dir_ / (command_ + "_manifest.json");
    atomic_write(path, manifest_.dump(2) + "\n");
    return path;
  }

 private:
  fs::path dir_;
  std::string command_;
  json manifest_;
};

int run(const std::vector<std::string>& argv);

// ------------------------------------------------------------ subcommands

int cmd_verify(const CommonOptions& common) {
  const ChainParams params = common.params();
  struct Row {
    std::string name;
    double residual;
    std::string status;
  };
  std::vector<Row> rows;
  bool failed = false;
  auto add = [&](const std::string& name, double residual) {
    const bool ok = residual < 1e-10;
    failed = failed || !ok;
    rows.push_back({name, residual, ok ? "PASS" : "FAIL"});
  };
  auto skip = [&](const std::string& name) {
    rows.push_back({name, 0.0, "SKIP"});
  };

  const auto cs = build_fermion_operators(params);
  double car = 0.0;
  for (int i = 0; i < params.n_sites; ++i)
    for (int j = 0; j < params.n_sites; ++j) {
      const Matrix mixed =
          anticommutator(cs[i].data, Matrix(cs[j].data.adjoint()));
      const double delta = (i == j) ? 1.0 : 0.0;
      car = std::max(car, (mixed - delta * Matrix::Identity(
                                               mixed.rows(), mixed.cols()))
                              .norm());
      car = std::max(car, anticommutator(cs[i].data, cs[j].data).norm());
    }
  add("canonical anticommutation relations", car);

  const DenseOperator h = build_hamiltonian(params);
  const DenseOperator parity =
      build_parity(params, 1, params.n_sites);
  add("[H, P] = 0", commutator(h.data, parity.data).norm());
  double jump_parity = 0.0;
  for (const DenseOperator& jump : build_jump_operators(params))
    jump_parity =
        std::max(jump_parity, anticommutator(jump.data, parity.data).norm());
  add("{L_j, P} = 0", jump_parity);

  if (params.momentum_pi_half_on_grid()) {
    const DenseOperator a0 = build_modulated_a0(params);
    const EigenoperatorFit fit0 = verify_eigenoperator(h, a0);
    add("[H, A0] = omega A0", fit0.residual);

    const NonlocalSymmetry nonlocal = build_nonlocal_a(params);
    const DenseOperator& a = nonlocal.op;
    add("A^2 = 0", (a.data * a.data).norm());
    add("{A, A^+} = 1",
        (anticommutator(a.data, Matrix(a.data.adjoint())) -
         Matrix::Identity(a.dim(), a.dim()))
            .norm());
    double jump_comm = 0.0;
    for (const DenseOperator& jump : build_jump_operators(params))
      jump_comm = std::max(jump_comm, commutator(jump.data, a.data).norm());
    add("[A, L_j] = 0", jump_comm);
    const EigenoperatorFit fit = verify_eigenoperator(h, a);
    add("[H, A] = omega A", fit.residual);

    const ChargeAndSymmetry charge = build_charge_q(params);
    add("[H, Q] = 0", commutator(h.data, charge.charge.data).norm());
    add("[H, S] = 0", commutator(h.data, charge.symmetry.data).norm());

    // a quartic interaction must leave the eigenoperator relation intact
    ChainParams interacting = params;
    interacting.interactions.push_back({0.37, {1, 2, 3, 4}});
    const DenseOperator h_int = build_hamiltonian(interacting);
    add("interaction transparency: [H+H_int, A] = omega A",
        verify_eigenoperator(h_int, a).residual);

    std::cout << "omega(A) = " << fit.omega.real() << (fit.omega.imag() < 0 ? "-" : "+")
              << std::abs(fit.omega.imag()) << "i\n";
  } else {
    for (const char* name :
         {"[H, A0] = omega A0", "A^2 = 0", "{A, A^+} = 1", "[A, L_j] = 0",
          "[H, A] = omega A", "[H, Q] = 0", "[H, S] = 0",
          "interaction transparency: [H+H_int, A] = omega A"})
      skip(name);
    std::cout << "note: mod(N,4) != 0, symmetry-operator checks skipped\n";
  }

  std::cout << "check,residual,status\n";
  for (const Row& row : rows)
    std::cout << row.name << ',' << format_double(row.residual) << ','
              << row.status << '\n';
  return failed ? 1 : 0;
}

int cmd_spectrum(const CommonOptions& common,
                 const std::vector<std::string>& argv,
                 const std::string& method, int max_excitations,
                 double realpart_cap) {
  const ChainParams params = common.params();
  RunRecorder rec(common, "spectrum", argv);
  rec.note("method", method);

  std::vector<AssembledEigenvalue> values;
  if (method == "exact") {
    const Superoperator sup = build_superoperator(params);
    for (const SpectralTriple& triple : full_spectrum(sup))
      values.push_back({triple.lambda, -1});
    rec.note("strategy", "dense diagonalization");
  } else {
    const RapiditySet rap =
        rapidities(shape_blocks(majorana_coefficients(params)));
    if (max_excitations >= 0 && realpart_cap >= 0)
      throw CLI::ValidationError(
          "--max-excitations and --realpart-cap are mutually exclusive");
    if (max_excitations >= 0) {
      values = enumerate_max_excitations_labeled(rap, max_excitations);
      rec.note("strategy", "max_excitations");
      rec.note("max_excitations", max_excitations);
    } else if (realpart_cap >= 0) {
      values = enumerate_realpart_cap_labeled(rap, realpart_cap);
      rec.note("strategy", "realpart_cap");
      rec.note("realpart_cap", realpart_cap);
    } else {
      values = enumerate_full_labeled(rap);
      rec.note("strategy", "full");
    }
  }

  std::sort(values.begin(), values.end(),
            [](const AssembledEigenvalue& a, const AssembledEigenvalue& b) {
              if (a.lambda.real() != b.lambda.real())
                return a.lambda.real() < b.lambda.real();
              if (a.lambda.imag() != b.lambda.imag())
                return a.lambda.imag() < b.lambda.imag();
              return a.n_excitations < b.n_excitations;
            });

  std::ostringstream csv;
  csv << "re,im,n_excitations,tag\n";
  for (const AssembledEigenvalue& v : values)
    csv << format_double(v.lambda.real()) << ','
        << format_double(v.lambda.imag()) << ',' << v.n_excitations << ','
        << classify_eigenvalue(v.lambda, common.class_tol) << '\n';
  rec.emit("spectrum.csv", csv.str());
  const fs::path manifest = rec.finish();
  std::cout << "spectrum: " << values.size() << " eigenvalues, manifest "
            << manifest.string() << '\n';
  return 0;
}

std::string trajectory_csv(const std::vector<double>& times,
                           const std::vector<Complex>& values) {
  std::ostringstream csv;
  csv << "t,re,im\n";
  for (std::size_t i = 0; i < times.size(); ++i)
    csv << format_double(times[i]) << ',' << format_double(values[i].real())
        << ',' << format_double(values[i].imag()) << '\n';
  return csv.str();
}

int cmd_evolve(const CommonOptions& common,
               const std::vector<std::string>& argv,
               const std::string& initial, double t_max, double dt_out,
               const std::string& method) {
  const ChainParams params = common.params();
  const EvolveMethod evolve_method =
      method == "spectral" ? EvolveMethod::Spectral : EvolveMethod::Adaptive;
  RunRecorder rec(common, "evolve", argv);
  rec.note("initial", initial);
  rec.note("t_max", t_max);
  rec.note("dt_out", dt_out);
  rec.note("method", method);

  struct Job {
    CovarianceState state;
    std::string suffix;
  };
  std::vector<Job> jobs;
  if (initial == "uniform-pair") {
    jobs.push_back({make_uniform_pair_state(params.n_sites), ""});
  } else if (initial == "random") {
    for (std::uint64_t seed : common.seeds)
      jobs.push_back({make_random_state(params.n_sites, seed),
                      "_seed" + std::to_string(seed)});
  } else if (initial.rfind("file:", 0) == 0) {
    std::ifstream in(initial.substr(5));
    if (!in)
      throw std::runtime_error("cannot open state file " + initial.substr(5));
    Job job{load_state(in), ""};
    if (job.state.n_sites() != params.n_sites)
      throw std::invalid_argument("state file size differs from --n");
    jobs.push_back(std::move(job));
  } else {
    throw CLI::ValidationError("unknown --initial '" + initial + "'");
  }

  for (const Job& job : jobs) {
    const Trajectory traj =
        integrate(job.state, params, t_max, dt_out, evolve_method);
    rec.emit("trajectory_c1c2" + job.suffix + ".csv",
             trajectory_csv(traj.times, traj.c1c2));
    rec.emit("trajectory_c1dag_c2" + job.suffix + ".csv",
             trajectory_csv(traj.times, traj.c1dag_c2));
    std::ostringstream final_state;
    save_state(final_state, traj.final_state);
    rec.emit("final_state" + job.suffix + ".txt", final_state.str());
  }
  const fs::path manifest = rec.finish();
  std::cout << "evolve: " << jobs.size() << " trajectories, manifest "
            << manifest.string() << '\n';
  return 0;
}

int cmd_scaling(const CommonOptions& common,
                const std::vector<std::string>& argv,
                const std::string& n_list_text, double t_max, double dt_out) {
  const std::vector<int> n_list = parse_int_list(n_list_text);
  for (int n : n_list)
    if (n % 4 != 0)
      throw CLI::ValidationError(
          "scaling sweep requires mod(N,4) = 0 entries");
  ChainParams tmpl = common.params();
  RunRecorder rec(common, "scaling", argv);
  rec.note("n_list", n_list);
  rec.note("t_max", t_max);
  rec.note("dt_out", dt_out);

  const std::vector<ScalingRow> rows =
      scaling_sweep(tmpl, n_list, t_max, dt_out);
  std::ostringstream csv;
  csv << "n,mean_abs,osc_amplitude,dominant_freq\n";
  for (const ScalingRow& row : rows)
    csv << row.n_sites << ',' << format_double(row.stats.mean_abs) << ','
        << format_double(row.stats.osc_amplitude) << ','
        << format_double(row.stats.dominant_freq) << '\n';
  rec.emit("scaling.csv", csv.str());

  auto fit_group = [&rows](auto keep) {
    std::vector<GapPoint> pts;
    for (const ScalingRow& row : rows)
      if (keep(row.n_sites) && row.stats.mean_abs > 0)
        pts.push_back({row.n_sites, row.stats.mean_abs});
    return pts;
  };
  json fits = json::object();
  if (n_list.size() >= 3) {
    const double split =
        std::sqrt(static_cast<double>(n_list.front()) * n_list.back());
    const auto small_pts = fit_group([&](int n) { return n <= split; });
    const auto large_pts = fit_group([&](int n) { return n > split; });
    const auto all_pts = fit_group([](int) { return true; });
    fits["overall_slope"] = fit_loglog_slope(all_pts);
    if (small_pts.size() >= 2)
      fits["small_n_slope"] = fit_loglog_slope(small_pts);
    if (large_pts.size() >= 2)
      fits["large_n_slope"] = fit_loglog_slope(large_pts);
    std::ostringstream fit_csv;
    fit_csv << "group,slope\n";
    for (const auto& [key, value] : fits.items())
      fit_csv << key << ',' << format_double(value.get<double>()) << '\n';
    rec.emit("scaling_fits.csv", fit_csv.str());
  }
  rec.note("fits", fits);
  const fs::path manifest = rec.finish();
  std::cout << "scaling: " << rows.size() << " sizes";
  if (fits.contains("overall_slope"))
    std::cout << ", overall slope "
              << format_double(fits["overall_slope"].get<double>());
  std::cout << ", manifest " << manifest.string() << '\n';
  return 0;
}

int cmd_rerun(const std::string& manifest_path) {
  const json manifest = json::parse(read_file(manifest_path));
  const std::vector<std::string> argv =
      manifest.at("argv").get<std::vector<std::string>>();
  if (!argv.empty() && argv.front() == "rerun")
    throw std::runtime_error("refusing to rerun a rerun manifest");
  const int code = run(argv);
  if (code != 0) return code;

  // the original out dir is encoded in the stored argv; resolve emitted
  // files relative to the rerun manifest's directory as a fallback
  bool all_match = true;
  for (const json& entry : manifest.at("outputs")) {
    const std::string name = entry.at("path").get<std::string>();
    fs::path path = fs::path(manifest_path).parent_path() / name;
    const std::string digest = hex64(fnv1a64(read_file(path)));
    const bool match = digest == entry.at("fnv1a64").get<std::string>();
    all_match = all_match && match;
    std::cout << "rerun: " << name << ' '
              << (match ? "reproduced" : "DIGEST MISMATCH") << '\n';
  }
  return all_match ? 0 : 1;
}

int run(const std::vector<std::string>& argv) {
  CLI::App app{"Driven-dissipative Kitaev chain toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key = value file; flags take precedence");

  CommonOptions common;
  app.add_option("--n", common.n, "number of lattice sites");
  app.add_option("--w", common.w, "hopping amplitude (complex 'a+bi')");
  app.add_option("--delta", common.delta, "pairing amplitude (complex)");
  app.add_option("--mu", common.mu, "chemical potential");
  app.add_option("--gamma", common.gamma, "dissipation rate");
  app.add_option("--jump-delta", common.jump_delta,
                 "jump asymmetry delta (complex)");
  app.add_option("--out", common.out_dir, "output directory");
  app.add_option("--seed", common.seeds, "random seeds (repeatable)");
  app.add_option("--class-tol", common.class_tol,
                 "eigenvalue classification tolerance");

  CLI::App* verify = app.add_subcommand(
      "verify", "run the exact symmetry/identity suite and report residuals");

  CLI::App* spectrum =
      app.add_subcommand("spectrum", "compute the Liouvillian spectrum");
  std::string sp_method = "thirdq";
  int max_excitations = -1;
  double realpart_cap = -1.0;
  spectrum->add_option("--method", sp_method, "exact | thirdq")
      ->check(CLI::IsMember({"exact", "thirdq"}));
  spectrum->add_option("--max-excitations", max_excitations,
                       "thirdq: cap on excited rapidities");
  spectrum->add_option("--realpart-cap", realpart_cap,
                       "thirdq: cap on |Re lambda|");

  CLI::App* evolve =
      app.add_subcommand("evolve", "integrate two-point correlations");
  std::string initial = "uniform-pair";
  double ev_tmax = 100.0, ev_dt = 0.1;
  std::string ev_method = "adaptive";
  evolve->add_option("--initial", initial,
                     "uniform-pair | random | file:PATH");
  evolve->add_option("--tmax", ev_tmax, "final time");
  evolve->add_option("--dt-out", ev_dt, "output sampling step");
  evolve->add_option("--method", ev_method, "adaptive | spectral")
      ->check(CLI::IsMember({"adaptive", "spectral"}));

  CLI::App* scaling =
      app.add_subcommand("scaling", "long-time observable vs chain length");
  std::string n_list = "4,8,12,16,20";
  double sc_tmax = 100.0, sc_dt = 0.25;
  scaling->add_option("--n-list", n_list, "comma-separated sizes");
  scaling->add_option("--tmax", sc_tmax, "final time");
  scaling->add_option("--dt-out", sc_dt, "output sampling step");

  CLI::App* rerun = app.add_subcommand(
      "rerun", "re-execute a manifest and verify output digests");
  std::string manifest_path;
  rerun->add_option("--manifest", manifest_path, "path to a run manifest")
      ->required();

  std::vector<std::string> reversed(argv.rbegin(), argv.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (verify->parsed()) return cmd_verify(common);
    if (spectrum->parsed())
      return cmd_spectrum(common, argv, sp_method, max_excitations,
                          realpart_cap);
    if (evolve->parsed())
      return cmd_evolve(common, argv, initial, ev_tmax, ev_dt, ev_method);
    if (scaling->parsed())
      return cmd_scaling(common, argv, n_list, sc_tmax, sc_dt);
    if (rerun->parsed()) return cmd_rerun(manifest_path);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ResourceError& e) {
    std::cerr << "resource error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args);
}
