#include "tripleid/cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "tripleid/dataset.hpp"
#include "tripleid/entailment.hpp"
#include "tripleid/error.hpp"
#include "tripleid/generator.hpp"
#include "tripleid/query_ops.hpp"
#include "tripleid/sparql.hpp"
#include "tripleid/store.hpp"

namespace tripleid {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double ms_between(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double, std::milli>(b - a).count();
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Common {
  unsigned workers = 0;
  std::uint64_t chunk_triples = 0;

  unsigned resolved_workers() const { return workers ? workers : default_workers(); }
  std::uint64_t resolved_chunk() const {
    return chunk_triples ? chunk_triples : chunk_triples_for_budget(kDefaultMemoryBudget);
  }
};

// Errors from opening or scanning a dataset map to the dataset exit code.
template <class F>
int with_dataset(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const FormatError& e) {
    err << "error: invalid dataset: " << e.what() << '\n';
    return kExitDataset;
  } catch (const ConsistencyError& e) {
    err << "error: invalid dataset: " << e.what() << '\n';
    return kExitDataset;
  }
}

int cmd_convert(const fs::path& input, const fs::path& basename, bool strict, std::ostream& out,
                std::ostream& err) {
  try {
    const auto sum = convert_file(input, basename, strict ? ParseMode::Strict : ParseMode::Lenient);
    for (const auto& d : sum.parse.errors)
      err << "warning: line " << d.line << ", byte " << d.offset << ": " << d.message << '\n';
    out << "triples\t" << sum.triples << '\n'
        << "subjects\t" << sum.subjects << '\n'
        << "predicates\t" << sum.predicates << '\n'
        << "objects\t" << sum.objects << '\n'
        << "terms\t" << sum.terms << '\n'
        << "blank_or_comment_lines\t" << sum.parse.skipped << '\n'
        << "malformed_lines\t" << sum.parse.errors.size() << '\n'
        << "bytes_tid\t" << sum.bytes_tid << '\n'
        << "bytes_sid\t" << sum.bytes_sid << '\n'
        << "bytes_pid\t" << sum.bytes_pid << '\n'
        << "bytes_oid\t" << sum.bytes_oid << '\n';
    err << "convert_ms\t" << sum.elapsed_ms << '\n';
    return kExitOk;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
}

int cmd_query(const fs::path& basename, const fs::path& query_file, const Common& c, std::ostream& out,
              std::ostream& err) {
  std::string text;
  try {
    text = read_text(query_file);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
  QueryAst ast;
  try {
    ast = parse_query(text);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitParse;
  }
  return with_dataset(err, [&] {
    const auto t0 = Clock::now();
    Dataset ds;
    try {
      ds = open_dataset(basename);
    } catch (const IoError& e) {
      err << "error: invalid dataset: " << e.what() << '\n';
      return int{kExitDataset};
    }
    const auto t1 = Clock::now();
    EvalOptions opts;
    opts.workers = c.resolved_workers();
    opts.chunk_triples = c.resolved_chunk();
    EvalTimings timings;
    BindingTable table;
    try {
      table = evaluate_query(ast, ds.paths.tid(), ds.dict, opts, &timings);
    } catch (const DisconnectedPatterns& e) {
      err << "error: " << e.what() << '\n';
      return int{kExitParse};
    } catch (const ResourceLimit& e) {
      err << "error: " << e.what() << '\n';
      return int{kExitLimit};
    }
    decode_table(table, ds.dict, out);
    const auto t2 = Clock::now();
    err << "rows\t" << table.rows() << '\n'
        << "load_ms\t" << ms_between(t0, t1) << '\n'
        << "search_ms\t" << timings.search_ms << '\n'
        << "join_ms\t" << timings.join_ms << '\n'
        << "total_ms\t" << ms_between(t0, t2) << '\n';
    return int{kExitOk};
  });
}

int cmd_entail(const fs::path& basename, int rule, const Common& c, std::ostream& out, std::ostream& err) {
  return with_dataset(err, [&] {
    Dataset ds;
    try {
      ds = open_dataset(basename);
    } catch (const IoError& e) {
      err << "error: invalid dataset: " << e.what() << '\n';
      return int{kExitDataset};
    }
    RuleOptions opts;
    opts.workers = c.resolved_workers();
    opts.chunk_triples = c.resolved_chunk();
    const auto t0 = Clock::now();
    const RuleRun run = run_rule(rule, ds.paths.tid(), ds.dict, opts);
    const auto t1 = Clock::now();
    for (const Triple& t : run.inferred)
      out << ds.dict.lexical(t.subj) << ' ' << ds.dict.lexical(t.pred) << ' ' << ds.dict.lexical(t.obj) << " .\n";
    const RuleCounts n = report_counts(run);
    err << "rule\tres1\tdist1\tres2\tdist2\tall\n"
        << rule << '\t' << n.res1 << '\t' << n.dist1 << '\t' << n.res2 << '\t' << n.dist2 << '\t' << n.all << '\n'
        << "entail_ms\t" << ms_between(t0, t1) << '\n';
    return int{kExitOk};
  });
}

int cmd_stats(const fs::path& basename, std::ostream& out, std::ostream& err) {
  return with_dataset(err, [&] {
    Dataset ds;
    try {
      ds = open_dataset(basename);
    } catch (const IoError& e) {
      err << "error: invalid dataset: " << e.what() << '\n';
      return int{kExitDataset};
    }
    const auto& p = ds.paths;
    out << "triples\t" << ds.triples << '\n'
        << "subjects\t" << ds.dict.role_count(Role::Subj) << '\n'
        << "predicates\t" << ds.dict.role_count(Role::Pred) << '\n'
        << "objects\t" << ds.dict.role_count(Role::Obj) << '\n'
        << "terms\t" << ds.dict.size() << '\n'
        << "bytes_tid\t" << fs::file_size(p.tid()) << '\n'
        << "bytes_sid\t" << fs::file_size(p.role_file(Role::Subj)) << '\n'
        << "bytes_pid\t" << fs::file_size(p.role_file(Role::Pred)) << '\n'
        << "bytes_oid\t" << fs::file_size(p.role_file(Role::Obj)) << '\n'
        << "device_memory_bytes\t" << device_memory_bytes(3 * ds.triples) << '\n';
    return int{kExitOk};
  });
}

int cmd_bench(const fs::path& basename, const fs::path& dir, const Common& c, unsigned repeat, std::ostream& out,
              std::ostream& err) {
  std::vector<fs::path> files;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec))
    if (entry.is_regular_file() && entry.path().extension() == ".rq") files.push_back(entry.path());
  if (ec) {
    err << "error: cannot list " << dir.string() << ": " << ec.message() << '\n';
    return kExitIo;
  }
  std::sort(files.begin(), files.end());

  return with_dataset(err, [&] {
    const auto t0 = Clock::now();
    Dataset ds;
    try {
      ds = open_dataset(basename);
    } catch (const IoError& e) {
      err << "error: invalid dataset: " << e.what() << '\n';
      return int{kExitDataset};
    }
    const double load_ms = ms_between(t0, Clock::now());
    EvalOptions opts;
    opts.workers = c.resolved_workers();
    opts.chunk_triples = c.resolved_chunk();

    out << "query\trun\tparse_ms\tload_ms\tsearch_ms\tjoin_ms\ttotal_ms\tresults\n";
    int status = kExitOk;
    for (const auto& f : files) {
      const std::string name = f.stem().string();
      std::vector<std::array<double, 4>> runs;
      std::size_t results = 0;
      try {
        const std::string text = read_text(f);
        for (unsigned r = 0; r < repeat; ++r) {
          const auto q0 = Clock::now();
          const QueryAst ast = parse_query(text);
          const auto q1 = Clock::now();
          EvalTimings tm;
          const BindingTable table = evaluate_query(ast, ds.paths.tid(), ds.dict, opts, &tm);
          const auto q2 = Clock::now();
          results = table.rows();
          runs.push_back({ms_between(q0, q1), tm.search_ms, tm.join_ms, ms_between(q0, q2)});
          out << name << '\t' << r + 1 << '\t' << runs.back()[0] << '\t' << load_ms << '\t' << runs.back()[1]
              << '\t' << runs.back()[2] << '\t' << runs.back()[3] << '\t' << results << '\n';
        }
      } catch (const FormatError&) {
        throw;
      } catch (const Error& e) {
        err << "error: " << name << ": " << e.what() << '\n';
        status = kExitParse;
        continue;
      }
      std::array<double, 4> med{};
      for (std::size_t k = 0; k < 4; ++k) {
        std::vector<double> v;
        for (const auto& r : runs) v.push_back(r[k]);
        std::sort(v.begin(), v.end());
        med[k] = v.size() % 2 ? v[v.size() / 2] : (v[v.size() / 2 - 1] + v[v.size() / 2]) / 2;
      }
      out << name << "\tmedian\t" << med[0] << '\t' << load_ms << '\t' << med[1] << '\t' << med[2] << '\t' << med[3]
          << '\t' << results << '\n';
    }
    return status;
  });
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"TripleID RDF store: convert, query, entail"};
  app.require_subcommand(1);
  Common common;
  auto add_parallel = [&](CLI::App* sub) {
    sub->add_option("--workers", common.workers, "Worker threads (default: TRIPLEID_WORKERS or all cores)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--chunk-triples", common.chunk_triples, "Triples per resident chunk")->check(CLI::PositiveNumber);
  };

  fs::path input, basename, query_file, queries_dir;
  bool strict = false;
  auto* convert = app.add_subcommand("convert", "N-Triples to .tid/.sid/.pid/.oid");
  convert->add_option("input", input, "N-Triples file")->required();
  convert->add_option("--out", basename, "Output basename")->required();
  convert->add_flag("--strict", strict, "Fail on the first malformed line");

  auto* query = app.add_subcommand("query", "Run a SPARQL query, TSV on stdout");
  query->add_option("basename", basename)->required();
  query->add_option("query", query_file, "Query file")->required();
  add_parallel(query);

  int rule = 0;
  auto* entail = app.add_subcommand("entail", "Apply one RDFS rule, N-Triples on stdout");
  entail->add_option("basename", basename)->required();
  entail->add_option("--rule", rule, "2, 3, 5, 7, 9 or 11")->required()->check(CLI::IsMember({2, 3, 5, 7, 9, 11}));
  add_parallel(entail);

  auto* stats = app.add_subcommand("stats", "Dataset counts and sizes");
  stats->add_option("basename", basename)->required();

  GenParams gen_params;
  auto* gen = app.add_subcommand("gen", "Synthetic N-Triples on stdout");
  gen->add_option("--triples", gen_params.triples)->required();
  gen->add_option("--subjects", gen_params.subjects, "Distinct subjects (default triples/10)");
  gen->add_option("--predicates", gen_params.predicates, "Distinct predicates")->capture_default_str();
  gen->add_option("--objects", gen_params.objects, "Distinct objects (default triples/5)");
  gen->add_option("--seed", gen_params.seed)->capture_default_str();
  gen->add_option("--iri-len", gen_params.iri_len, "Synthetic IRI length")->capture_default_str();

  unsigned repeat = 1;
  auto* bench = app.add_subcommand("bench", "Time every .rq file in a directory");
  bench->add_option("basename", basename)->required();
  bench->add_option("queries", queries_dir, "Directory of .rq files")->required();
  bench->add_option("--repeat", repeat)->check(CLI::PositiveNumber)->capture_default_str();
  add_parallel(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitParse;
  }

  if (*convert) return cmd_convert(input, basename, strict, out, err);
  if (*query) return cmd_query(basename, query_file, common, out, err);
  if (*entail) return cmd_entail(basename, rule, common, out, err);
  if (*stats) return cmd_stats(basename, out, err);
  if (*gen) {
    try {
      generate(gen_params, out);
    } catch (const Error& e) {
      err << "error: " << e.what() << '\n';
      return kExitParse;
    }
    return kExitOk;
  }
  return cmd_bench(basename, queries_dir, common, repeat, out, err);
}

}  // namespace tripleid
