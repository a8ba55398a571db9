#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "twinbias/checkpoint.hpp"
#include "twinbias/constants.hpp"
#include "twinbias/density.hpp"
#include "twinbias/error.hpp"
#include "twinbias/io_util.hpp"
#include "twinbias/scan.hpp"
#include "twinbias/special.hpp"

using namespace twinbias;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int out_schema_version = 1;

// output sink: file when --out is given, stdout otherwise
struct out_target {
  std::ofstream file;
  std::ostream* os = &std::cout;
  void open(const std::string& path) {
    if (path.empty()) return;
    file.open(path, std::ios::binary | std::ios::trunc);
    if (!file) raise(errkind::resource, "cannot open output file: " + path);
    os = &file;
  }
  std::ostream& stream() { return *os; }
};

struct cli_config {
  std::string limit_s, threads_s, segment_s;
  std::string out_path, format;
  std::string checkpoint_path, checkpoint_every_s, halt_after_s;
  std::string qmax_s = "11", comparator_s = "le", trend_s;
  std::string first_k_s, modulus_s = "770", residue_s = "1";
  double precision = 1e-9;
};

unsigned resolve_threads(const std::string& flag) {
  std::string v = flag;
  if (v.empty())
    if (const char* env = std::getenv("TWINBIAS_THREADS")) v = env;
  if (v.empty()) return 1;
  const u64 t = parse_u64_arg(v, "threads");
  if (t < 1 || t > 256) raise(errkind::argument, "threads must be in [1, 256]");
  return unsigned(t);
}

u64 resolve_segment_len(const std::string& flag) {
  std::string v = flag;
  if (v.empty())
    if (const char* env = std::getenv("TWINBIAS_SEGMENT_LEN")) v = env;
  if (v.empty()) return u64(1) << 22;
  return parse_u64_arg(v, "segment-len");
}

u64 required_limit(const std::string& flag, const char* cmd) {
  if (flag.empty()) raise(errkind::argument, std::string(cmd) + ": --limit is required");
  return parse_u64_arg(flag, "limit");
}

std::string resolve_format(const std::string& flag, const char* fallback) {
  const std::string f = flag.empty() ? fallback : flag;
  if (f != "csv" && f != "json") raise(errkind::argument, "format must be csv or json");
  return f;
}

comparator resolve_comparator(const std::string& s) {
  if (s == "le") return comparator::less_or_equal;
  if (s == "lt") return comparator::strict_less;
  raise(errkind::argument, "comparator must be le or lt");
}

std::string rat_str(const rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

std::string full_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void emit_json(out_target& out, const ordered_json& j) { out.stream() << j.dump(2) << "\n"; }

scan_options base_options(const cli_config& cfg) {
  scan_options opt;
  opt.threads = resolve_threads(cfg.threads_s);
  opt.segment_len = resolve_segment_len(cfg.segment_s);
  return opt;
}

int cmd_scan(const cli_config& cfg) {
  const u64 limit = required_limit(cfg.limit_s, "scan");
  const std::string format = resolve_format(cfg.format, "csv");
  scan_options opt = base_options(cfg);
  if (!cfg.checkpoint_path.empty()) {
    if (format != "csv") raise(errkind::argument, "checkpointing requires csv output");
    if (cfg.out_path.empty()) raise(errkind::argument, "checkpointing requires --out");
    checkpoint_config ckpt;
    ckpt.path = cfg.checkpoint_path;
    if (!cfg.checkpoint_every_s.empty())
      ckpt.every = parse_u64_arg(cfg.checkpoint_every_s, "checkpoint-every");
    if (!cfg.halt_after_s.empty())
      ckpt.halt_after = i64(parse_u64_arg(cfg.halt_after_s, "halt-after-checkpoints"));
    const scan_run_result res = scan_to_csv(limit, opt, cfg.out_path, &ckpt);
    if (res.halted) {
      std::cerr << "halted after " << res.checkpoints_written
                << " checkpoint write(s); rerun the same command to resume\n";
    } else {
      std::cerr << "scan complete: pi2=" << res.counters.pi2 << " pie=" << res.counters.pie
                << "\n";
    }
    return 0;
  }
  if (format == "csv") {
    if (!cfg.out_path.empty()) {
      const scan_run_result res = scan_to_csv(limit, opt, cfg.out_path, nullptr);
      std::cerr << "scan complete: pi2=" << res.counters.pi2 << " pie=" << res.counters.pie
                << "\n";
      return 0;
    }
    out_target out;
    std::ostream& os = out.stream();
    os << csv_header << "\n";
    opt.on_record = [&os](const twin_record& rec) { os << csv_line(rec) << "\n"; };
    scan(limit, opt);
    return 0;
  }
  const scan_counters c = scan(limit, opt);
  ordered_json j;
  j["schema_version"] = out_schema_version;
  j["command"] = "scan";
  j["limit"] = limit;
  j["segment_len"] = opt.segment_len;
  j["threads"] = opt.threads;
  j["pi2"] = c.pi2;
  j["pie"] = c.pie;
  j["piu"] = c.piu;
  j["pieq"] = c.pieq;
  ordered_json hits = ordered_json::array();
  for (const auto& [key, count] : c.residue_hits)
    hits.push_back({{"modulus", key.first}, {"residue", key.second}, {"count", count}});
  j["exceptional_residue_hits"] = hits;
  ordered_json twin_hits = ordered_json::array();
  for (const auto& [key, count] : c.twin_residue_hits)
    twin_hits.push_back({{"modulus", key.first}, {"residue", key.second}, {"count", count}});
  j["twin_residue_hits"] = twin_hits;
  out_target out;
  out.open(cfg.out_path);
  emit_json(out, j);
  return 0;
}

int cmd_ratio(const cli_config& cfg) {
  const u64 limit = required_limit(cfg.limit_s, "ratio");
  const std::string format = resolve_format(cfg.format, "csv");
  const scan_options opt = base_options(cfg);
  out_target out;
  out.open(cfg.out_path);
  if (format == "csv") {
    out.stream() << "k,p,pie,pi2,ratio\n";
    ratio_series(limit, opt, [&](const ratio_row& r) {
      out.stream() << r.k << "," << r.p << "," << r.pie << "," << r.pi2 << ","
                   << format_ratio(r.pie, r.pi2) << "\n";
    });
    return 0;
  }
  ordered_json rows = ordered_json::array();
  ratio_series(limit, opt, [&](const ratio_row& r) {
    rows.push_back({{"k", r.k},
                    {"p", r.p},
                    {"pie", r.pie},
                    {"pi2", r.pi2},
                    {"ratio", format_ratio(r.pie, r.pi2)},
                    {"ratio_real", double(r.pie) / double(r.pi2)}});
  });
  ordered_json j;
  j["schema_version"] = out_schema_version;
  j["command"] = "ratio";
  j["limit"] = limit;
  j["rows"] = rows;
  emit_json(out, j);
  return 0;
}

int cmd_table1(const cli_config& cfg) {
  const std::string format = resolve_format(cfg.format, "csv");
  scan_options opt = base_options(cfg);
  std::vector<twin_record> rows;
  opt.on_record = [&](const twin_record& rec) { rows.push_back(rec); };
  scan(2000, opt);
  out_target out;
  out.open(cfg.out_path);
  if (format == "csv") {
    out.stream() << "p,phi_minus,phi_plus,delta\n";
    for (const twin_record& r : rows)
      out.stream() << r.p << "," << r.phi_minus << "," << r.phi_plus << "," << r.delta << "\n";
    return 0;
  }
  ordered_json jrows = ordered_json::array();
  for (const twin_record& r : rows)
    jrows.push_back(
        {{"p", r.p}, {"phi_minus", r.phi_minus}, {"phi_plus", r.phi_plus}, {"delta", r.delta}});
  ordered_json j;
  j["schema_version"] = out_schema_version;
  j["command"] = "table1";
  j["limit"] = 2000;
  j["rows"] = jrows;
  emit_json(out, j);
  return 0;
}

struct exceptional_row {
  u64 p;
  i64 delta;
  u64 pi2, pie;
};

// first `count` exceptional primes with running counters; the 100th lies
// well under the fixed 5*10^5 scan bound
std::vector<exceptional_row> first_exceptional(const cli_config& cfg, u64 count, u64 limit) {
  scan_options opt = base_options(cfg);
  std::vector<exceptional_row> rows;
  u64 pi2 = 0, pie = 0;
  opt.on_record = [&](const twin_record& rec) {
    ++pi2;
    if (rec.cls != twin_class::exceptional) return;
    ++pie;
    if (pie <= count) rows.push_back({rec.p, rec.delta, pi2, pie});
  };
  scan(limit, opt);
  if (rows.size() < count)
    raise(errkind::range, "scan bound too small for the requested exceptional count");
  return rows;
}

int cmd_table2(const cli_config& cfg) {
  const std::string format = resolve_format(cfg.format, "csv");
  const std::vector<exceptional_row> rows = first_exceptional(cfg, 100, 500000);
  out_target out;
  out.open(cfg.out_path);
  if (format == "csv") {
    out.stream() << "p,delta,pi2,pie,ratio\n";
    for (const exceptional_row& r : rows)
      out.stream() << r.p << "," << r.delta << "," << r.pi2 << "," << r.pie << ","
                   << format_ratio(r.pie, r.pi2) << "\n";
    return 0;
  }
  ordered_json jrows = ordered_json::array();
  for (const exceptional_row& r : rows)
    jrows.push_back({{"p", r.p},
                     {"delta", r.delta},
                     {"pi2", r.pi2},
                     {"pie", r.pie},
                     {"ratio", format_ratio(r.pie, r.pi2)},
                     {"ratio_real", double(r.pie) / double(r.pi2)}});
  ordered_json j;
  j["schema_version"] = out_schema_version;
  j["command"] = "table2";
  j["rows"] = jrows;
  emit_json(out, j);
  return 0;
}

int cmd_equality(const cli_config& cfg) {
  const u64 limit = required_limit(cfg.limit_s, "equality");
  const std::string format = resolve_format(cfg.format, "csv");
  const scan_options opt = base_options(cfg);
  const std::vector<u64> records = equality_scan(limit, opt.segment_len, opt.threads);
  out_target out;
  out.open(cfg.out_path);
  if (format == "csv") {
    out.stream() << "p\n";
    for (u64 p : records) out.stream() << p << "\n";
    return 0;
  }
  ordered_json j;
  j["schema_version"] = out_schema_version;
  j["command"] = "equality";
  j["limit"] = limit;
  j["count"] = records.size();
  j["records"] = records;
  emit_json(out, j);
  return 0;
}

int cmd_residue(const cli_config& cfg) {
  const std::string format = resolve_format(cfg.format, "json");
  const u64 modulus = parse_u64_arg(cfg.modulus_s, "modulus");
  const u64 residue = parse_u64_arg(cfg.residue_s, "residue");
  if (modulus < 2 || residue >= modulus)
    raise(errkind::argument, "need modulus >= 2 and residue < modulus");
  const bool limit_mode = !cfg.limit_s.empty();
  if (limit_mode && !cfg.first_k_s.empty())
    raise(errkind::argument, "--limit and --first-k are mutually exclusive");
  u64 count = 0, total = 0, bound = 0;
  if (limit_mode) {
    bound = parse_u64_arg(cfg.limit_s, "limit");
    scan_options opt = base_options(cfg);
    opt.exceptional_residues = {{modulus, residue}};
    const scan_counters c = scan(bound, opt);
    count = c.residue_hits.at({modulus, residue});
    total = c.pie;
  } else {
    bound = cfg.first_k_s.empty() ? 100 : parse_u64_arg(cfg.first_k_s, "first-k");
    const scan_options opt = base_options(cfg);
    count = residue_count_first_k(bound, modulus, residue, opt);
    total = bound;
  }
  const double proportion = total ? double(count) / double(total) : 0.0;
  out_target out;
  out.open(cfg.out_path);
  if (format == "csv") {
    out.stream() << "mode,bound,modulus,residue,count,total,proportion\n"
                 << (limit_mode ? "limit" : "first_k") << "," << bound << "," << modulus << ","
                 << residue << "," << count << "," << total << "," << full_double(proportion)
                 << "\n";
    return 0;
  }
  ordered_json j;
  j["schema_version"] = out_schema_version;
  j["command"] = "residue";
  j["mode"] = limit_mode ? "limit" : "first_k";
  j[limit_mode ? "limit" : "first_k"] = bound;
  j["modulus"] = modulus;
  j["residue"] = residue;
  j["count"] = count;
  j["total_exceptional"] = total;
  j["proportion"] = proportion;
  emit_json(out, j);
  return 0;
}

ordered_json euler_json(const euler_value& v) {
  return {{"value", v.value},
          {"tail_bound", v.tail_bound},
          {"tail_estimate", v.tail_estimate},
          {"truncation_prime", v.truncation_prime},
          {"method", v.method == euler_method::direct_product ? "direct_product"
                                                              : "direct_sum_with_tail_estimate"}};
}

int cmd_constants(const cli_config& cfg) {
  const std::string format = resolve_format(cfg.format, "json");
  if (!(cfg.precision > 0)) raise(errkind::range, "precision must be positive");
  const euler_value c2 = twin_prime_constant(cfg.precision);
  const u64 starts[] = {3, 5, 7, 13};
  std::vector<euler_value> tails;
  for (u64 r0 : starts) tails.push_back(tail_series(r0, cfg.precision));
  // the two lower bounds, with the series error propagated through each formula
  const double log_77_72 = std::log(77.0 / 72.0);
  const double log_3_2 = std::log(1.5);
  const double lower_exceptional = 1.0 / 135.0 - tails[3].value / (135.0 * log_77_72);
  const double lower_unexceptional = 1.0 - tails[1].value / log_3_2;
  const double exc_err = tails[3].tail_bound / (135.0 * log_77_72);
  const double unexc_err = tails[1].tail_bound / log_3_2;
  out_target out;
  out.open(cfg.out_path);
  if (format == "csv") {
    out.stream() << "name,value,error_bound\n";
    out.stream() << "twin_prime_constant," << full_double(c2.value) << ","
                 << full_double(c2.tail_bound) << "\n";
    for (size_t i = 0; i < tails.size(); ++i)
      out.stream() << "tail_from_" << starts[i] << "," << full_double(tails[i].value) << ","
                   << full_double(tails[i].tail_bound) << "\n";
    out.stream() << "lower_exceptional," << full_double(lower_exceptional) << ","
                 << full_double(exc_err) << "\n";
    out.stream() << "lower_unexceptional," << full_double(lower_unexceptional) << ","
                 << full_double(unexc_err) << "\n";
    return 0;
  }
  ordered_json j;
  j["schema_version"] = out_schema_version;
  j["command"] = "constants";
  j["precision"] = cfg.precision;
  j["twin_prime_constant"] = euler_json(c2);
  ordered_json jt = ordered_json::array();
  for (size_t i = 0; i < tails.size(); ++i) {
    ordered_json t = euler_json(tails[i]);
    t["r0"] = starts[i];
    jt.push_back(t);
  }
  j["tail_series"] = jt;
  j["bounds"] = {{"lower_exceptional", lower_exceptional},
                 {"lower_exceptional_error", exc_err},
                 {"lower_unexceptional", lower_unexceptional},
                 {"lower_unexceptional_error", unexc_err}};
  emit_json(out, j);
  return 0;
}

ordered_json density_json(const density_value& v) {
  return {{"q_max", v.q_max},
          {"comparator", comparator_name(v.cmp)},
          {"prefactor", rat_str(v.prefactor)},
          {"sum", rat_str(v.sum)},
          {"value_rational", rat_str(v.value)},
          {"value_real", v.value_real},
          {"pair_count", v.pair_count},
          {"satisfying_count", v.satisfying_count}};
}

int cmd_density(const cli_config& cfg) {
  const std::string format = resolve_format(cfg.format, "json");
  const comparator cmp = resolve_comparator(cfg.comparator_s);
  out_target out;
  out.open(cfg.out_path);
  if (!cfg.trend_s.empty()) {
    std::vector<u64> qs;
    std::stringstream ss(cfg.trend_s);
    std::string item;
    while (std::getline(ss, item, ',')) qs.push_back(parse_u64_arg(item, "trend"));
    const std::vector<density_value> rows = density_trend(qs, cmp);
    if (format == "csv") {
      out.stream() << "q_max,comparator,value_rational,value_real,satisfying_count,pair_count\n";
      for (const density_value& v : rows)
        out.stream() << v.q_max << "," << comparator_name(v.cmp) << "," << rat_str(v.value) << ","
                     << full_double(v.value_real) << "," << v.satisfying_count << ","
                     << v.pair_count << "\n";
      return 0;
    }
    ordered_json j;
    j["schema_version"] = out_schema_version;
    j["command"] = "density_trend";
    j["comparator"] = comparator_name(cmp);
    ordered_json jrows = ordered_json::array();
    for (const density_value& v : rows) jrows.push_back(density_json(v));
    j["rows"] = jrows;
    emit_json(out, j);
    return 0;
  }
  const density_value v = conjecture_value({parse_u64_arg(cfg.qmax_s, "qmax"), cmp});
  if (format == "csv") {
    out.stream()
        << "q_max,comparator,prefactor,sum,value_rational,value_real,pair_count,satisfying_count\n";
    out.stream() << v.q_max << "," << comparator_name(v.cmp) << "," << rat_str(v.prefactor) << ","
                 << rat_str(v.sum) << "," << rat_str(v.value) << "," << full_double(v.value_real)
                 << "," << v.pair_count << "," << v.satisfying_count << "\n";
    return 0;
  }
  ordered_json j;
  j["schema_version"] = out_schema_version;
  j["command"] = "density";
  const ordered_json fields = density_json(v);
  for (const auto& [key, val] : fields.items()) j[key] = val;
  emit_json(out, j);
  return 0;
}

int cmd_quadruple(const cli_config& cfg) {
  const u64 limit = required_limit(cfg.limit_s, "quadruple");
  const std::string format = resolve_format(cfg.format, "csv");
  const std::vector<u64> records = prime_quadruple_scan(limit);
  out_target out;
  out.open(cfg.out_path);
  if (format == "csv") {
    out.stream() << "r\n";
    for (u64 r : records) out.stream() << r << "\n";
    return 0;
  }
  ordered_json j;
  j["schema_version"] = out_schema_version;
  j["command"] = "quadruple";
  j["limit"] = limit;
  j["count"] = records.size();
  j["records"] = records;
  emit_json(out, j);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  cli_config cfg;
  CLI::App app{"twin prime totient-bias toolkit"};
  app.require_subcommand(1);

  const auto add_common = [&](CLI::App* sub, bool with_limit) {
    if (with_limit)
      sub->add_option("--limit", cfg.limit_s, "upper scan bound (integer, 1e9 and 1_000 accepted)");
    sub->add_option("--threads", cfg.threads_s, "worker threads (env TWINBIAS_THREADS)");
    sub->add_option("--segment-len", cfg.segment_s, "segment length (env TWINBIAS_SEGMENT_LEN)");
    sub->add_option("--out", cfg.out_path, "output file (default stdout)");
    sub->add_option("--format", cfg.format, "csv or json");
  };

  CLI::App* scan_cmd = app.add_subcommand("scan", "stream classified twin records");
  add_common(scan_cmd, true);
  scan_cmd->add_option("--checkpoint", cfg.checkpoint_path, "checkpoint state file (csv + --out)");
  scan_cmd->add_option("--checkpoint-every", cfg.checkpoint_every_s,
                       "integers scanned between checkpoint writes");
  scan_cmd->add_option("--halt-after-checkpoints", cfg.halt_after_s,
                       "stop cleanly after N checkpoint writes");
  CLI::App* ratio_cmd = app.add_subcommand("ratio", "running exceptional ratio at each record");
  add_common(ratio_cmd, true);
  CLI::App* table1_cmd = app.add_subcommand("table1", "twin pairs up to 2000 with totients");
  add_common(table1_cmd, false);
  CLI::App* table2_cmd = app.add_subcommand("table2", "first 100 exceptional primes");
  add_common(table2_cmd, false);
  CLI::App* equality_cmd = app.add_subcommand("equality", "twin primes with equal totients");
  add_common(equality_cmd, true);
  CLI::App* residue_cmd = app.add_subcommand("residue", "residue-class counts of exceptionals");
  add_common(residue_cmd, true);
  residue_cmd->add_option("--first-k", cfg.first_k_s, "count within the first K exceptionals");
  residue_cmd->add_option("--modulus", cfg.modulus_s, "modulus (default 770)");
  residue_cmd->add_option("--residue", cfg.residue_s, "residue class (default 1)");
  CLI::App* constants_cmd = app.add_subcommand("constants", "product and series constants");
  add_common(constants_cmd, false);
  constants_cmd->add_option("--precision", cfg.precision, "absolute error target (default 1e-9)");
  CLI::App* density_cmd = app.add_subcommand("density", "finite-cutoff density evaluation");
  add_common(density_cmd, false);
  density_cmd->add_option("--qmax", cfg.qmax_s, "prime cutoff (default 11)");
  density_cmd->add_option("--comparator", cfg.comparator_s, "le or lt (default le)");
  density_cmd->add_option("--trend", cfg.trend_s, "comma-separated cutoffs; emit one row each");
  CLI::App* quadruple_cmd = app.add_subcommand("quadruple", "prime quadruple pattern scan");
  add_common(quadruple_cmd, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (scan_cmd->parsed()) return cmd_scan(cfg);
    if (ratio_cmd->parsed()) return cmd_ratio(cfg);
    if (table1_cmd->parsed()) return cmd_table1(cfg);
    if (table2_cmd->parsed()) return cmd_table2(cfg);
    if (equality_cmd->parsed()) return cmd_equality(cfg);
    if (residue_cmd->parsed()) return cmd_residue(cfg);
    if (constants_cmd->parsed()) return cmd_constants(cfg);
    if (density_cmd->parsed()) return cmd_density(cfg);
    if (quadruple_cmd->parsed()) return cmd_quadruple(cfg);
  } catch (const error& e) {
    std::cerr << "error: " << errkind_name(e.kind()) << ": " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
