#include "sere/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "sere/datasource/corpus.hpp"
#include "sere/errors.hpp"
#include "sere/service/serialize.hpp"

namespace sere {

namespace {

struct CommonOptions {
  std::string config_path;
  std::string backend;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "JSON config file")->check(CLI::ExistingFile);
  cmd->add_option("--backend", opts.backend, "live | corpus:<path> (default from SERE_BACKEND, else live)");
}

ServiceConfig load_config(const CommonOptions& opts, const ServiceConfig::EnvLookup& env) {
  ServiceConfig config;
  if (!opts.config_path.empty()) config.merge_file(opts.config_path);
  config.merge_env(env);
  if (!opts.backend.empty()) config.backend = opts.backend;
  return config;
}

struct QueryOptions {
  CommonOptions common;
  std::string term;
  std::string lang = "en";
  std::string fields;
  std::string format = "table";
  std::size_t top = 20;
  std::string record_path;
};

int run_query(const QueryOptions& opts, std::ostream& out, std::ostream& err,
              const ServiceConfig::EnvLookup& env) {
  ServiceConfig config;
  std::optional<LanguageCode> lang;
  FieldSet fields;
  try {
    config = load_config(opts.common, env);
    lang.emplace(opts.lang);
    fields = FieldSet::parse(opts.fields);
    config.pipeline.validate();
  } catch (const std::exception& e) {
    err << "sere query: " << e.what() << "\n";
    return kExitUsage;
  }
  if (std::find(config.languages.begin(), config.languages.end(), *lang) == config.languages.end()) {
    config.languages.push_back(*lang);
  }

  std::shared_ptr<http::RecordingTransport> recorder;
  if (!opts.record_path.empty()) {
    recorder = std::make_shared<http::RecordingTransport>(std::make_shared<http::HttplibTransport>());
  }

  std::shared_ptr<Backend> backend;
  try {
    backend = make_backend(config, recorder);
  } catch (const std::invalid_argument& e) {
    err << "sere query: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "sere query: backend unavailable: " << e.what() << "\n";
    return kExitBackend;
  }

  int code = kExitOk;
  try {
    const Explorer explorer(backend, config.pipeline);
    const auto result = explorer.explore(*lang, opts.term, fields);
    if (opts.format == "xml") {
      out << to_xml(result);
    } else if (opts.format == "json") {
      out << to_json(result);
    } else {
      out << to_table(result, opts.top);
    }
    for (const auto& warning : result.warnings) err << "warning: " << warning << "\n";
  } catch (const NoMatchError& e) {
    err << "sere query: " << e.what() << "\n";
    code = kExitNoMatch;
  } catch (const EmptyInputError& e) {
    err << "sere query: " << e.what() << "\n";
    code = kExitUsage;
  } catch (const UnsupportedLanguageError& e) {
    err << "sere query: " << e.what() << "\n";
    code = kExitUsage;
  } catch (const std::exception& e) {
    err << "sere query: backend failure: " << e.what() << "\n";
    code = kExitBackend;
  }

  if (recorder) {
    try {
      recorder->save(opts.record_path);
    } catch (const std::exception& e) {
      err << "sere query: cannot write recording: " << e.what() << "\n";
      if (code == kExitOk) code = kExitBackend;
    }
  }
  return code;
}

int run_ingest_check(const std::string& path, const std::string& lang_text, std::ostream& out, std::ostream& err) {
  try {
    const auto corpus = ingest_corpus(path, LanguageCode(lang_text));
    const auto stats = corpus.stats();
    out << stats.articles << " articles\n"
        << "distinct tokens: " << stats.distinct_tokens << "\n"
        << "postings: " << stats.postings << "\n"
        << "links: " << stats.links << "\n"
        << "linked targets: " << stats.linked_targets << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    err << path << ": " << e.what() << "\n";
    return kExitBadCorpus;
  }
}

struct ServeOptions {
  CommonOptions common;
  std::string bind;
  std::string static_root;
  std::vector<std::string> languages;
};

int run_serve(const ServeOptions& opts, std::ostream& err, const ServiceConfig::EnvLookup& env) {
  try {
    auto config = load_config(opts.common, env);
    if (!opts.bind.empty()) config.bind = opts.bind;
    if (!opts.static_root.empty()) config.static_root = opts.static_root;
    if (!opts.languages.empty()) {
      config.languages.clear();
      for (const auto& code : opts.languages) config.languages.emplace_back(code);
    }
    const auto [host, port] = config.host_port();
    auto backend = make_backend(config);
    auto explorer = std::make_shared<const Explorer>(backend, config.pipeline);
    auto api = std::make_shared<const Api>(explorer, config.languages);
    Server server(api, config.static_root);
    err << "sere: serving " << backend->describe() << " on http://" << host << ":" << port << "\n";
    if (!server.listen(host, port)) {
      err << "sere serve: cannot listen on " << config.bind << "\n";
      return kExitBackend;
    }
    return kExitOk;
  } catch (const std::invalid_argument& e) {
    err << "sere serve: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "sere serve: " << e.what() << "\n";
    return kExitBackend;
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
            const ServiceConfig::EnvLookup& env) {
  CLI::App app{"Semantic relatedness explorer over Wikipedia and DBpedia", "sere"};
  app.require_subcommand(1);

  QueryOptions query;
  auto* query_cmd = app.add_subcommand("query", "Rank concepts related to a term");
  query_cmd->add_option("term", query.term, "Search term")->required();
  query_cmd->add_option("--lang", query.lang, "Wikipedia language edition")->capture_default_str();
  query_cmd->add_option("--fields", query.fields, "Comma-separated output fields (default: all)");
  query_cmd->add_option("--format", query.format, "Output format")
      ->check(CLI::IsMember({"xml", "json", "table"}))
      ->capture_default_str();
  query_cmd->add_option("--top", query.top, "Rows shown in table format")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  query_cmd->add_option("--record", query.record_path, "Write live API exchanges to a replay fixture");
  add_common(query_cmd, query.common);

  std::string ingest_path;
  std::string ingest_lang = "en";
  auto* ingest_cmd = app.add_subcommand("ingest-check", "Validate a corpus file");
  ingest_cmd->add_option("path", ingest_path, "Corpus file (JSON lines)")->required();
  ingest_cmd->add_option("--lang", ingest_lang, "Corpus language")->capture_default_str();

  ServeOptions serve;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  serve_cmd->add_option("--bind", serve.bind, "host:port (default from SERE_BIND, else 127.0.0.1:8080)");
  serve_cmd->add_option("--static-root", serve.static_root, "Directory served at /");
  serve_cmd->add_option("--languages", serve.languages, "Language whitelist")->delimiter(',');
  add_common(serve_cmd, serve.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "sere: " << e.what() << "\n\n";
    const auto* failed = query_cmd->parsed() ? query_cmd : ingest_cmd->parsed() ? ingest_cmd
                                                         : serve_cmd->parsed() ? serve_cmd : nullptr;
    err << (failed ? failed->help() : app.help());
    return kExitUsage;
  }

  if (*query_cmd) return run_query(query, out, err, env);
  if (*ingest_cmd) return run_ingest_check(ingest_path, ingest_lang, out, err);
  return run_serve(serve, err, env);
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  return run_cli(argc, argv, out, err, [](const char* name) { return std::getenv(name); });
}

}  // namespace sere
