// skyglyphs command-line front end: ingest, serve, snapshot, synth.

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "skyglyphs/catalog.hpp"
#include "skyglyphs/manifest.hpp"
#include "skyglyphs/serialize.hpp"
#include "skyglyphs/server.hpp"
#include "skyglyphs/session.hpp"
#include "skyglyphs/synthetic.hpp"

namespace fs = std::filesystem;
using namespace skyglyphs;

namespace {

struct CorpusArgs {
    fs::path manifest;
    fs::path products;
    fs::path keywords;
    fs::path buzzwords;
};

void add_corpus_options(CLI::App* app, CorpusArgs& args, bool with_env) {
    auto* m = app->add_option("--manifest", args.manifest, "Deck manifest (JSON array or NDJSON)")
                  ->required()
                  ->check(CLI::ExistingFile);
    auto* p = app->add_option("--products", args.products, "Product dictionary, one phrase per line")
                  ->check(CLI::ExistingFile);
    auto* k = app->add_option("--keywords", args.keywords, "Keyword dictionary")->check(CLI::ExistingFile);
    auto* b = app->add_option("--buzzwords", args.buzzwords, "Buzzword dictionary")->check(CLI::ExistingFile);
    if (with_env) {
        m->envname("SKYGLYPH_MANIFEST");
        p->envname("SKYGLYPH_PRODUCTS");
        k->envname("SKYGLYPH_KEYWORDS");
        b->envname("SKYGLYPH_BUZZWORDS");
    }
}

ServerConfig to_server_config(const CorpusArgs& args) {
    ServerConfig cfg;
    cfg.manifest = args.manifest;
    cfg.products = args.products;
    cfg.keywords = args.keywords;
    cfg.buzzwords = args.buzzwords;
    return cfg;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

ApiServer* g_server = nullptr;

void on_signal(int) {
    if (g_server) g_server->http().stop();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SkyGlyphs: deck-repository exploration engine"};
    app.require_subcommand(1);

    // ingest
    CorpusArgs ingest_args;
    fs::path ingest_out;
    auto* ingest = app.add_subcommand("ingest", "Compute deck metrics, corpus stats and glyph records");
    add_corpus_options(ingest, ingest_args, false);
    ingest->add_option("--out", ingest_out, "Output JSON path")->required();

    // serve
    CorpusArgs serve_args;
    ServerConfig serve_cfg;
    auto* serve = app.add_subcommand("serve", "Serve the corpus, glyphs and live sessions over HTTP");
    add_corpus_options(serve, serve_args, true);
    serve->add_option("--seed", serve_cfg.seed, "Default simulation seed")->envname("SKYGLYPH_SEED");
    serve->add_option("--port", serve_cfg.port, "Listen port")->envname("SKYGLYPH_PORT");
    serve->add_option("--host", serve_cfg.host, "Bind address")->envname("SKYGLYPH_HOST");
    serve->add_option("--assets", serve_cfg.asset_root, "Slide image root (default: manifest directory)")
        ->envname("SKYGLYPH_ASSETS")
        ->check(CLI::ExistingDirectory);
    serve->add_option("--frame-rate", serve_cfg.frame_rate, "Published frames per second")
        ->envname("SKYGLYPH_FRAME_RATE");
    serve->add_option("--max-sessions", serve_cfg.max_sessions, "Concurrent session limit")
        ->envname("SKYGLYPH_MAX_SESSIONS");

    // snapshot
    CorpusArgs snap_args;
    fs::path snap_out;
    fs::path snap_log;
    std::uint64_t snap_seed = 1;
    std::uint64_t snap_ticks = 0;
    auto* snapshot = app.add_subcommand("snapshot", "Replay a command log offline and write the final frame");
    add_corpus_options(snapshot, snap_args, false);
    snapshot->add_option("--seed", snap_seed, "Simulation seed");
    snapshot->add_option("--commands", snap_log, "NDJSON command log to replay")->check(CLI::ExistingFile);
    snapshot->add_option("--ticks", snap_ticks, "Extra ticks to run after the log");
    snapshot->add_option("--out", snap_out, "Output JSON path")->required();

    // synth
    SyntheticSpec synth_spec;
    fs::path synth_dir;
    auto* synth = app.add_subcommand("synth", "Write a synthetic manifest and dictionaries");
    synth->add_option("--decks", synth_spec.n_decks, "Number of decks");
    synth->add_option("--slides", synth_spec.n_slides_total, "Total number of slides");
    synth->add_option("--seed", synth_spec.seed, "Generator seed");
    synth->add_option("--out-dir", synth_dir, "Output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*ingest) {
            auto catalog = load_catalog(to_server_config(ingest_args));
            write_text(ingest_out, ingest_document(catalog).dump(2) + "\n");
            std::cerr << "ingested " << catalog.size() << " decks";
            if (catalog.stats) std::cerr << ", " << catalog.stats->n_slides_total << " slides";
            std::cerr << " -> " << ingest_out.string() << "\n";
        } else if (*serve) {
            auto cfg = to_server_config(serve_args);
            cfg.seed = serve_cfg.seed;
            cfg.port = serve_cfg.port;
            cfg.host = serve_cfg.host;
            cfg.asset_root = serve_cfg.asset_root;
            cfg.frame_rate = serve_cfg.frame_rate;
            cfg.max_sessions = serve_cfg.max_sessions;
            auto catalog = std::make_shared<const Catalog>(load_catalog(cfg));
            ApiServer server(catalog, cfg);
            g_server = &server;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            std::cerr << "serving " << catalog->size() << " decks on " << cfg.host << ":" << cfg.port << "\n";
            if (!server.listen()) {
                std::cerr << "error: cannot listen on " << cfg.host << ":" << cfg.port << "\n";
                return 1;
            }
            g_server = nullptr;
        } else if (*snapshot) {
            auto catalog = std::make_shared<const Catalog>(load_catalog(to_server_config(snap_args)));
            SessionConfig sc;
            sc.sim.seed = snap_seed;
            Session session(catalog, sc);
            if (!snap_log.empty()) {
                for (const auto& c : parse_command_log(read_file(snap_log))) {
                    auto r = session.execute(c);
                    if (!r.ok) std::cerr << "command rejected: " << r.message << "\n";
                }
            }
            for (std::uint64_t t = 0; t < snap_ticks; ++t) {
                session.execute(cmd::Tick{session.clock() + sc.sim.dt});
            }
            auto doc = to_json(session.frame());
            doc["glyphs"] = glyph_records(*catalog);
            write_text(snap_out, doc.dump() + "\n");
        } else if (*synth) {
            fs::create_directories(synth_dir);
            auto decks = synthetic_corpus(synth_spec);
            write_text(synth_dir / "manifest.json", manifest_json(decks).dump() + "\n");
            write_text(synth_dir / "products.txt", dictionary_text(synth_spec.products));
            write_text(synth_dir / "keywords.txt", dictionary_text(synth_spec.keywords));
            write_text(synth_dir / "buzzwords.txt", dictionary_text(synth_spec.buzzwords));
            std::cerr << "wrote " << decks.size() << " decks to " << synth_dir.string() << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
