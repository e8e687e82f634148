// Command-line front end: computes Gromov-Witten invariants of the plane
// and its blowups, manages the persistent value cache, and runs the
// verification table.

#include <CLI11.hpp>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "gw/solver.hpp"

using namespace gw;

namespace {

struct CommonOpts {
  int r = -1;  // -1: infer from alpha
  std::string relations_dir;
  std::string cache_path;
  bool cremona = true;
  bool drop_trailing = true;
  bool assume_conjectural = false;
  std::string format = "exact";
  bool trace = false;
};

std::string default_relations_dir() {
  if (const char* env = std::getenv("GW_RELATIONS_DIR")) return env;
  return "data/relations";
}

std::vector<int> parse_alpha(const std::string& text) {
  // comma list with the "VxN" sugar for repeated entries: 2x10 = ten twos
  std::vector<int> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto x = item.find('x');
    if (x != std::string::npos) {
      int v = std::stoi(item.substr(0, x));
      int n = std::stoi(item.substr(x + 1));
      for (int i = 0; i < n; ++i) out.push_back(v);
    } else {
      out.push_back(std::stoi(item));
    }
  }
  return out;
}

std::string format_value(const Rat& v, const std::string& format) {
  if (format == "exact" || format == "tsv") return v.str();
  if (format.rfind("decimal", 0) == 0) {
    int digits = 10;
    auto colon = format.find(':');
    if (colon != std::string::npos)
      digits = std::stoi(format.substr(colon + 1));
    std::ostringstream os;
    boost::multiprecision::mpf_float_100 f(v);
    os << std::setprecision(digits) << f;
    return os.str() + "  (decimal, lossy)";
  }
  throw CLI::ValidationError("unknown format " + format);
}

std::unique_ptr<Solver> make_solver(const CommonOpts& c,
                                    bool optional_assets = false) {
  SolverOptions opt;
  opt.cremona = c.cremona;
  opt.drop_trailing = c.drop_trailing;
  opt.assume_conjectural = c.assume_conjectural;
  opt.trace = c.trace;
  auto assets = load_assets(c.relations_dir, optional_assets);
  auto solver = std::make_unique<Solver>(std::move(assets), opt);
  if (!c.cache_path.empty()) {
    if (!solver->store().load(c.cache_path, solver->assets_checksum()))
      std::cerr << "cache " << c.cache_path
                << " has a stale relation checksum; ignoring it\n";
  }
  return solver;
}

void flush_cache(Solver& solver, const CommonOpts& c) {
  if (!c.cache_path.empty())
    solver.store().save(c.cache_path, solver.assets_checksum());
}

int guard_flags(const CommonOpts& c, char type, int g,
                const std::vector<int>& alpha) {
  if (type != 'N' && g != 2) {
    std::cerr << "types H, P, K are genus-2 invariants\n";
    return 2;
  }
  if (g > 0 && c.drop_trailing && alpha.size() > 8 && !c.assume_conjectural) {
    // allowed, but the trailing-1 drop stays off there unless opted in;
    // nothing to reject
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact Gromov-Witten invariants of blowups of the plane"};
  app.require_subcommand(1);

  CommonOpts c;
  c.relations_dir = default_relations_dir();
  app.add_option("--relations", c.relations_dir, "relation asset directory");
  app.add_option("--cache", c.cache_path, "persistent value cache path");
  app.add_flag("--cremona,!--no-cremona", c.cremona,
               "use the quadratic transformation to lower degrees");
  app.add_flag("--drop-trailing,!--no-drop-trailing", c.drop_trailing,
               "drop trailing multiplicity-1 entries");
  app.add_flag("--assume-conjectural", c.assume_conjectural,
               "allow the trailing-1 drop for g > 0 with more than 8 points");
  app.add_option("--format", c.format, "exact | decimal:<digits> | tsv");
  app.add_flag("--trace", c.trace, "log solved keys to stderr");
  app.add_option("--r", c.r, "number of blown-up points (default: |alpha|)");

  // compute
  auto* cmd_compute = app.add_subcommand("compute", "one invariant");
  std::string type_s = "N", alpha_s;
  int g = 0, d = 1;
  cmd_compute->add_option("--type", type_s, "N | H | P | K")->required();
  cmd_compute->add_option("--g", g, "genus 0..2")->required();
  cmd_compute->add_option("--d", d, "degree")->required();
  cmd_compute->add_option("--alpha", alpha_s, "multiplicities, e.g. 3,2x4");

  // table
  auto* cmd_table = app.add_subcommand("table", "range of invariants (TSV)");
  std::string t_type = "N", t_alpha;
  int t_g = 0, t_maxd = 4;
  bool keep_going = false;
  cmd_table->add_option("--type", t_type)->required();
  cmd_table->add_option("--g", t_g)->required();
  cmd_table->add_option("--max-d", t_maxd)->required();
  cmd_table->add_option("--alpha", t_alpha, "fixed multiplicity pattern");
  cmd_table->add_flag("--keep-going", keep_going,
                      "mark failed cells ERR and continue");

  // verify
  auto* cmd_verify = app.add_subcommand(
      "verify", "recompute the published table and report pass/fail");
  bool extended = false;
  cmd_verify->add_flag("--extended", extended,
                       "include the long-running entries");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmd_compute) {
      auto alpha = parse_alpha(alpha_s);
      if (int rc = guard_flags(c, type_s.at(0), g, alpha)) return rc;
      if (c.r >= 0 && int(alpha.size()) > c.r) {
        std::cerr << "alpha has more entries than --r\n";
        return 2;
      }
      auto solver = make_solver(c);
      auto key = InvariantKey::make(type_s.at(0), g, d, alpha);
      Rat v = solver->invariant(key);
      flush_cache(*solver, c);
      std::cout << type_s << " " << g << " " << d << " ";
      if (alpha.empty()) std::cout << "-";
      for (size_t i = 0; i < alpha.size(); ++i)
        std::cout << (i ? "," : "") << alpha[i];
      std::cout << " = " << format_value(v, c.format) << "\n";
      return 0;
    }

    if (*cmd_table) {
      auto pattern = parse_alpha(t_alpha);
      auto solver = make_solver(c);
      std::cout << "type\tg\td\talpha\tvalue\n";
      for (int dd = 1; dd <= t_maxd; ++dd) {
        auto key = InvariantKey::make(t_type.at(0), t_g, dd, pattern);
        if (!key.valid()) continue;
        std::string cell;
        try {
          cell = solver->invariant(key).str();
        } catch (const std::exception& e) {
          if (!keep_going) throw;
          cell = "ERR";
        }
        std::cout << t_type << "\t" << t_g << "\t" << dd << "\t";
        if (pattern.empty()) std::cout << "-";
        for (size_t i = 0; i < pattern.size(); ++i)
          std::cout << (i ? "," : "") << pattern[i];
        std::cout << "\t" << cell << "\n";
      }
      flush_cache(*solver, c);
      return 0;
    }

    if (*cmd_verify) {
      auto solver = make_solver(c);
      struct Row {
        const char* label;
        char type;
        int g, d;
        std::vector<int> alpha;
        Rat expect;
      };
      std::vector<Row> rows = {
          {"K(2) d=3 a=1", 'K', 2, 3, {1}, Rat(-1, 12)},
          {"P(2) d=4 a=2", 'P', 2, 4, {2}, Rat(-2, 3)},
          {"H(2) d=4 a=2", 'H', 2, 4, {2}, Rat(-5, 3)},
          {"H(2) d=4 a=2,2", 'H', 2, 4, {2, 2}, Rat(-1, 3)},
          {"H(2) d=5 a=3", 'H', 2, 5, {3}, Rat(72)},
          {"N(2) d=6 a=2^8", 'N', 2, 6, std::vector<int>(8, 2), Rat(1)},
          {"N(2) d=6 a=2^9", 'N', 2, 6, std::vector<int>(9, 2), Rat(0)},
          {"N(2) d=7 a=2^10", 'N', 2, 7, std::vector<int>(10, 2), Rat(3113)},
          {"N(2) d=7 a=2^11", 'N', 2, 7, std::vector<int>(11, 2), Rat(313)},
          {"N(1) d=8 a=2^12", 'N', 1, 8, std::vector<int>(12, 2),
           Rat(10527885, 2)},
      };
      if (extended) {
        rows.push_back({"H(2) d=6 a=2^4", 'H', 2, 6, std::vector<int>(4, 2),
                        Rat(157689)});
        rows.push_back({"N(2) d=8 a=2^11", 'N', 2, 8, std::vector<int>(11, 2),
                        Rat(25721212)});
        rows.push_back({"N(2) d=8 a=2^12", 'N', 2, 8, std::vector<int>(12, 2),
                        Rat(4604976)});
        rows.push_back({"N(1) d=8 a=2^11", 'N', 1, 8, std::vector<int>(11, 2),
                        Rat(24949650)});
        rows.push_back({"N(1) d=9 a=2^12", 'N', 1, 9, std::vector<int>(12, 2),
                        Rat(58460483880)});
        rows.push_back({"N(1) d=9 a=2^13", 'N', 1, 9, std::vector<int>(13, 2),
                        Rat(14967968670)});
        rows.push_back({"N(1) d=10 a=2^15", 'N', 1, 10,
                        std::vector<int>(15, 2), Rat(12335169291480)});
        rows.push_back({"N(1) d=11 a=2^16", 'N', 1, 11,
                        std::vector<int>(16, 2), Rat(44275609195448900)});
      }
      int failures = 0;
      for (const auto& row : rows) {
        std::string status;
        try {
          Rat got = solver->invariant(
              InvariantKey::make(row.type, row.g, row.d, row.alpha));
          if (got == row.expect) {
            status = "pass";
          } else {
            status = "FAIL (got " + got.str() + ", expected " +
                     row.expect.str() + ")";
            ++failures;
          }
        } catch (const std::exception& e) {
          status = std::string("FAIL (") + e.what() + ")";
          ++failures;
        }
        std::cout << row.label << ": " << status << "\n";
        std::cout.flush();
      }
      flush_cache(*solver, c);
      if (failures) {
        std::cout << failures << " mismatches\n";
        return 1;
      }
      std::cout << "all values match\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
