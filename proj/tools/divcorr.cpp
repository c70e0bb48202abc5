// divcorr: command-line front end.
//
//   divcorr verify   --suite <names> --xmax <n> --vmax <n>
//   divcorr sum      --kind <dd|dpoly> --x <n> --v <n>
//   divcorr constants [--v <n>] [--json]
//   divcorr compare  --x <list> --v <list> --kind <k> [--alpha <a>] [--truncation <1|2|3>] --out <csv|json>
//   divcorr dump     --table <spf|divisor|shifted> --n <N> [--v <n>] --file <path>
//
// Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "divcorr/divcorr.hpp"

namespace {

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kUsage = 2, kResource = 3 };

std::vector<std::string> split_csv(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& item : items) {
    std::size_t start = 0;
    while (start <= item.size()) {
      const auto comma = item.find(',', start);
      const auto piece = item.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      if (!piece.empty()) out.push_back(piece);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  return out;
}

std::vector<std::uint64_t> parse_u64_list(const std::vector<std::string>& items) {
  std::vector<std::uint64_t> out;
  for (const auto& s : split_csv(items)) {
    // Accept 1e6-style shorthand as well as plain integers.
    const double as_double = std::stod(s);
    if (s.find_first_of("eE.") != std::string::npos) {
      if (as_double < 0 || as_double != std::floor(as_double)) throw divcorr::contract_error("not a non-negative integer: " + s);
      out.push_back(std::uint64_t(as_double));
    } else {
      out.push_back(std::stoull(s));
    }
  }
  return out;
}

int run_verify(const std::vector<std::string>& suite_args, std::uint64_t xmax, std::uint64_t vmax,
               const divcorr::SieveConfig& sieve) {
  auto suites = split_csv(suite_args);
  if (suites.empty() || (suites.size() == 1 && suites[0] == "all")) suites = divcorr::verify_suite_names();
  const auto report = divcorr::run_verify(suites, {xmax, vmax, sieve});
  for (const auto& s : report.suites) {
    std::printf("%-18s %s  checks=%llu failures=%llu", s.name.c_str(), s.passed() ? "PASS" : "FAIL",
                static_cast<unsigned long long>(s.checks), static_cast<unsigned long long>(s.failures));
    if (!s.passed()) std::printf("  first: %s", s.first_counterexample.c_str());
    std::printf("\n");
  }
  return report.passed() ? kOk : kVerifyFailed;
}

int run_sum(const std::string& kind, std::uint64_t x, std::uint64_t v, const divcorr::SieveConfig& sieve) {
  if (v < 1) throw divcorr::contract_error("--v must be positive");
  if (kind == "dd") {
    const auto table = divcorr::build_divisor_table(std::max<std::uint64_t>(1, x + v), sieve);
    std::printf("%s\n", divcorr::to_string(divcorr::sum_dd(x, v, table).value).c_str());
  } else if (kind == "dpoly") {
    const auto spf = divcorr::build_spf(std::max<std::uint64_t>(1, x + v), sieve);
    std::printf("%s\n", divcorr::to_string(divcorr::sum_dpoly(x, v, spf).value).c_str());
  } else {
    throw divcorr::contract_error("--kind must be dd or dpoly");
  }
  return kOk;
}

// nlohmann's dump picks the shortest round-trip form; floats here keep 17
// significant digits and integers go out as strings.
void write_json(std::string& out, const nlohmann::ordered_json& j, int depth) {
  const std::string pad(2 * (depth + 1), ' ');
  if (j.is_object()) {
    out += "{\n";
    std::size_t i = 0;
    for (const auto& [key, value] : j.items()) {
      out += pad + nlohmann::json(key).dump() + ": ";
      write_json(out, value, depth + 1);
      out += ++i < j.size() ? ",\n" : "\n";
    }
    out += std::string(2 * depth, ' ') + "}";
  } else if (j.is_number_float()) {
    out += divcorr::format_double(j.get<double>());
  } else if (j.is_number_integer()) {
    out += "\"" + j.dump() + "\"";
  } else {
    out += j.dump();
  }
}

int run_constants(std::optional<std::uint64_t> v, bool json) {
  const auto& zc = divcorr::zeta_constants();
  nlohmann::ordered_json out;
  out["truncation"] = zc.truncation;
  out["gamma"] = {{"value", zc.gamma}, {"abs_error_bound", zc.abs_error_bound.gamma}};
  out["zeta2"] = {{"value", zc.zeta2}, {"abs_error_bound", zc.abs_error_bound.zeta2}};
  out["zeta_prime_2"] = {{"value", zc.zeta_prime_2}, {"abs_error_bound", zc.abs_error_bound.zeta_prime_2}};
  out["zeta_double_prime_2"] = {{"value", zc.zeta_double_prime_2},
                                {"abs_error_bound", zc.abs_error_bound.zeta_double_prime_2}};
  if (v) {
    const auto c = divcorr::asymptotic_coefficients(*v, zc);
    out["v"] = *v;
    out["c1"] = c.c1;
    out["c2"] = c.c2;
    out["A1"] = c.A1;
    out["A2"] = c.A2;
  }
  if (json) {
    std::string text;
    write_json(text, out, 0);
    std::cout << text << "\n";
    return kOk;
  }
  for (const auto& [key, value] : out.items()) {
    if (value.is_object()) {
      std::printf("%-20s %s  (+/- %.3g)\n", key.c_str(), divcorr::format_double(value["value"].get<double>()).c_str(),
                  value["abs_error_bound"].get<double>());
    } else if (value.is_number_float()) {
      std::printf("%-20s %s\n", key.c_str(), divcorr::format_double(value.get<double>()).c_str());
    } else {
      std::printf("%-20s %s\n", key.c_str(), value.dump().c_str());
    }
  }
  return kOk;
}

int run_dump(const std::string& table, std::uint64_t n, std::uint64_t v, const std::string& path,
             const divcorr::SieveConfig& sieve) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  if (table == "spf") divcorr::write_table(out, divcorr::build_spf(n, sieve));
  else if (table == "divisor") divcorr::write_table(out, divcorr::build_divisor_table(n, sieve));
  else if (table == "shifted") divcorr::write_table(out, divcorr::build_shifted_product_table(n, v, sieve));
  else throw divcorr::contract_error("--table must be spf, divisor or shifted");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Divisor-correlation identities, constants and asymptotic comparisons"};
  app.require_subcommand(1);

  divcorr::SieveConfig sieve;
  std::string memcap;
  app.add_option("--memcap", memcap, "Memory cap in bytes (K/M/G suffix allowed); overrides DIVCORR_MEMCAP");
  app.add_option("--segment-size", sieve.segment_size, "Sieve segment size in entries");
  app.add_option("--threads", sieve.threads, "Worker threads")->check(CLI::PositiveNumber);

  auto* verify = app.add_subcommand("verify", "Run exact and floating-point identity suites");
  std::vector<std::string> suites{"all"};
  std::uint64_t xmax = 10'000, vmax = 50;
  verify->add_option("--suite", suites, "Comma-separated suite names, or 'all'")->delimiter(',');
  verify->add_option("--xmax", xmax, "Largest summation bound / n");
  verify->add_option("--vmax", vmax, "Largest shift");

  auto* sum = app.add_subcommand("sum", "Exact correlation sum");
  std::string sum_kind;
  std::uint64_t sum_x = 0, sum_v = 1;
  sum->add_option("--kind", sum_kind, "dd or dpoly")->required();
  sum->add_option("--x", sum_x, "Summation bound")->required();
  sum->add_option("--v", sum_v, "Shift")->required();

  auto* constants = app.add_subcommand("constants", "Print gamma, zeta(2) and derivatives, and c/A coefficients");
  std::optional<std::uint64_t> const_v;
  bool json = false;
  constants->add_option("--v", const_v, "Shift for c1, c2, A1, A2");
  constants->add_flag("--json", json, "Emit JSON");

  auto* compare = app.add_subcommand("compare", "Empirical sums against asymptotic main terms");
  std::vector<std::string> x_items, v_items;
  std::string kind = "dpoly", out_format = "csv";
  std::optional<unsigned> alpha;
  int truncation = 3;
  double residual_exponent = divcorr::kDefaultResidualExponent;
  compare->add_option("--x", x_items, "Bounds (comma-separated)")->required();
  compare->add_option("--v", v_items, "Shifts (comma-separated)")->required();
  compare->add_option("--kind", kind, "dd, dpoly or sigma_corr");
  compare->add_option("--alpha", alpha, "Integer alpha for sigma_corr");
  compare->add_option("--truncation", truncation, "Main-term depth used for the residual (1, 2 or 3)");
  compare->add_option("--residual-exponent", residual_exponent, "Exponent for residual scaling");
  compare->add_option("--out", out_format, "csv or json");

  auto* dump = app.add_subcommand("dump", "Write a sieve table in the binary table format");
  std::string table;
  std::uint64_t dump_n = 0, dump_v = 1;
  std::string file;
  dump->add_option("--table", table, "spf, divisor or shifted")->required();
  dump->add_option("--n", dump_n, "Table limit")->required();
  dump->add_option("--v", dump_v, "Shift (shifted tables)");
  dump->add_option("--file", file, "Output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (!memcap.empty()) sieve.memory_cap = divcorr::parse_byte_count(memcap);
    if (*verify) return run_verify(suites, xmax, vmax, sieve);
    if (*sum) return run_sum(sum_kind, sum_x, sum_v, sieve);
    if (*constants) return run_constants(const_v, json);
    if (*dump) return run_dump(table, dump_n, dump_v, file, sieve);
    if (*compare) {
      divcorr::RunConfig cfg;
      cfg.x_list = parse_u64_list(x_items);
      cfg.v_list = parse_u64_list(v_items);
      cfg.kind = divcorr::parse_compare_kind(kind);
      cfg.alpha = alpha;
      cfg.truncation = truncation;
      cfg.residual_exponent = residual_exponent;
      if (out_format == "csv") cfg.output = divcorr::OutputFormat::csv;
      else if (out_format == "json") cfg.output = divcorr::OutputFormat::json;
      else throw divcorr::contract_error("--out must be csv or json");
      cfg.sieve = sieve;
      const auto rows = divcorr::run_compare(cfg);
      std::cout << divcorr::emit(rows, cfg.output);
      std::cout.flush();
      if (!std::cout) {
        std::cerr << "error: failed writing output\n";
        return kVerifyFailed;
      }
      return kOk;
    }
  } catch (const divcorr::resource_error& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return kResource;
  } catch (const std::bad_alloc&) {
    std::cerr << "resource error: allocation failed\n";
    return kResource;
  } catch (const divcorr::contract_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const divcorr::range_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kVerifyFailed;
  }
  return kUsage;
}
