#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <optional>

#include "siedm/index.hpp"
#include "siedm/oracle.hpp"
#include "siedm/search.hpp"

namespace siedm::cli {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path);
  return data;
}

unsigned threads_from_env() {
  const char* v = std::getenv("SIEDM_THREADS");
  if (v == nullptr || *v == '\0') return 1;
  char* end = nullptr;
  const unsigned long n = std::strtoul(v, &end, 10);
  if (*end != '\0' || n == 0) throw CLI::ValidationError("SIEDM_THREADS", "must be a positive integer");
  return static_cast<unsigned>(std::min<unsigned long>(n, 256));
}

struct QueryArgs {
  std::string text;
  std::string file;
  std::int64_t tau = -1;

  void add(CLI::App* cmd, bool tau_required) {
    auto* q = cmd->add_option("-q,--query", text, "query string");
    auto* qf = cmd->add_option("-Q,--query-file", file, "file holding the query bytes");
    q->excludes(qf);
    auto* t = cmd->add_option("-t,--tau", tau, "distance threshold (>= 0)");
    if (tau_required) t->required();
  }
  bool given() const { return !text.empty() || !file.empty(); }
  std::string load() const {
    if (!given()) throw CLI::RequiredError("--query or --query-file");
    return file.empty() ? text : read_file(file);
  }
  std::uint64_t checked_tau() const {
    if (tau < 0) throw CLI::ValidationError("--tau", "must be >= 0");
    return static_cast<std::uint64_t>(tau);
  }
};

void print_metadata(const EspIndex& idx, std::ostream& out) {
  const SizeBreakdown s = idx.sizes();
  out << "n\t" << idx.variable_count() << '\n'
      << "sigma\t" << idx.sigma() << '\n'
      << "rounds\t" << idx.rounds() << '\n'
      << "text_length\t" << idx.text_length() << '\n'
      << "stored_vectors\t" << idx.stored_vector_count() << '\n'
      << "encoded_tree_bytes\t" << s.encoded_tree << '\n'
      << "char_vector_bytes\t" << s.char_vectors << '\n'
      << "length_vector_bytes\t" << s.length_vector << '\n'
      << "total_bytes\t" << s.total() << '\n';
}

void write_json(const std::vector<Occurrence>& occ, std::size_t qlen, std::uint64_t tau, std::ostream& out) {
  nlohmann::json j;
  j["query_length"] = qlen;
  j["tau"] = tau;
  j["occurrences"] = nlohmann::json::array();
  for (const Occurrence& o : occ) {
    j["occurrences"].push_back({{"pos", o.position}, {"dist", o.distance}, {"pieces", o.pieces}});
  }
  out << j.dump() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"siedm: succinct ESP index with approximate edit-distance-with-moves search"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "timings on stderr");

  std::string input;
  std::string output;
  std::string index_path;

  auto* build = app.add_subcommand("build", "index a text file");
  build->add_option("-i,--input", input, "text file")->required();
  build->add_option("-o,--output", output, "index file to write")->required();

  QueryArgs sq;
  std::string format = "tsv";
  bool no_prune = false;
  auto* search_cmd = app.add_subcommand("search", "approximate search");
  search_cmd->add_option("-x,--index", index_path, "index file")->required();
  sq.add(search_cmd, true);
  search_cmd->add_option("--format", format, "tsv or json")->check(CLI::IsMember({"tsv", "json"}));
  search_cmd->add_flag("--no-prune", no_prune, "disable the early abort on the mu sum");

  QueryArgs tq;
  auto* stats_cmd = app.add_subcommand("stats", "index metadata and search counters");
  stats_cmd->add_option("-x,--index", index_path, "index file")->required();
  tq.add(stats_cmd, false);

  auto* oracle_cmd = app.add_subcommand("oracle", "brute-force references");
  oracle_cmd->require_subcommand(1);
  std::string edm_s;
  std::string edm_q;
  oracle::EdmConfig edm_cfg;
  auto* edm = oracle_cmd->add_subcommand("edm", "exact edit distance with moves (tiny strings)");
  edm->add_option("-s", edm_s, "first string")->required();
  edm->add_option("-q", edm_q, "second string")->required();
  edm->add_option("--max-depth", edm_cfg.max_depth, "search depth cap");
  edm->add_option("--max-len", edm_cfg.max_len, "string length cap");

  QueryArgs wq;
  auto* window = oracle_cmd->add_subcommand("window", "per-position decomposition distance");
  window->add_option("-i,--input", input, "text file")->required();
  wq.add(window, false);

  QueryArgs kq;
  auto* stab = oracle_cmd->add_subcommand("stab", "cross-check search against exhaustive enumeration");
  stab->add_option("-i,--input", input, "text file")->required();
  kq.add(stab, true);

  std::vector<const char*> cargv;
  for (const auto& a : argv) cargv.push_back(a.c_str());

  using Clock = std::chrono::steady_clock;
  const auto started = Clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - started).count(); };

  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());

    if (*build) {
      const std::string text = read_file(input);
      const EspIndex idx = EspIndex::build(text);
      idx.save(output);
      print_metadata(idx, out);
      if (verbose) err << "build_seconds\t" << elapsed() << '\n';
      return kOk;
    }

    if (*search_cmd) {
      const std::uint64_t tau = sq.checked_tau();
      SearchOptions opts;
      opts.prune = !no_prune;
      opts.threads = threads_from_env();
      const EspIndex idx = EspIndex::load(index_path);
      const std::string q = sq.load();
      const auto occ = search(idx, q, tau, opts);
      if (format == "json") {
        write_json(occ, q.size(), tau, out);
      } else {
        for (const Occurrence& o : occ) out << o.position << '\t' << o.distance << '\n';
      }
      if (verbose) err << "search_seconds\t" << elapsed() << '\n';
      return kOk;
    }

    if (*stats_cmd) {
      const EspIndex idx = EspIndex::load(index_path);
      print_metadata(idx, out);
      if (tq.given()) {
        const std::uint64_t tau = tq.checked_tau();
        SearchOptions opts;
        opts.threads = threads_from_env();
        SearchStats st;
        search(idx, tq.load(), tau, opts, &st);
        out << "#TN\t" << st.traversed_nodes << '\n'
            << "#CAND\t" << st.candidates << '\n'
            << "#TP\t" << st.accepted << '\n'
            << "#OCC\t" << st.occurrences << '\n';
      }
      return kOk;
    }

    if (*edm) {
      const auto d = oracle::exact_edm(edm_s, edm_q, edm_cfg);
      if (d) {
        out << *d << '\n';
      } else {
        out << "unknown\n";
      }
      return kOk;
    }

    if (*window) {
      const std::string text = read_file(input);
      const std::string q = wq.load();
      if (q.size() < 2) throw QueryError("query must contain at least 2 bytes");
      if (q.size() > text.size()) throw QueryError("query longer than the text");
      const auto dist = oracle::window_l1(text, q);
      for (std::size_t i = 0; i < dist.size(); ++i) out << (i + 1) << '\t' << dist[i] << '\n';
      return kOk;
    }

    if (*stab) {
      const std::uint64_t tau = kq.checked_tau();
      const std::string text = read_file(input);
      const std::string q = kq.load();
      const EspIndex idx = EspIndex::build(text);
      const auto got = search(idx, q, tau);
      const oracle::PlainTree tree(text);
      const auto want = oracle::search(tree, q, tau);
      const bool agree = got == want;
      out << "search\t" << got.size() << '\n'
          << "oracle\t" << want.size() << '\n'
          << "agree\t" << (agree ? "yes" : "no") << '\n';
      return agree ? kOk : kDisagree;
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kFormat;
  } catch (const QueryError& e) {
    err << "error: " << e.what() << '\n';
    return kQuery;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace siedm::cli
