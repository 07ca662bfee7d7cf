#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "skyglyphs/catalog.hpp"
#include "skyglyphs/manifest.hpp"
#include "skyglyphs/serialize.hpp"
#include "skyglyphs/session.hpp"

namespace skyglyphs {

struct ServerConfig {
    std::string host = "0.0.0.0";
    int port = 8080;
    std::filesystem::path manifest;
    std::filesystem::path products;
    std::filesystem::path keywords;
    std::filesystem::path buzzwords;
    std::filesystem::path asset_root;  // slide image root; defaults to the manifest's directory
    std::uint64_t seed = 1;
    double frame_rate = 30.0;
    std::size_t max_sessions = 16;
    bool run_ticker = true;  // off in tests that drive ticks by hand
    SessionConfig session;

    [[nodiscard]] double tick_rate() const { return 1.0 / session.sim.dt; }

    void validate() const {
        session.validate();
        if (!(frame_rate > 0) || frame_rate > tick_rate() + 1e-9) {
            throw std::invalid_argument("frame rate must be positive and at most the tick rate");
        }
        if (max_sessions == 0) throw std::invalid_argument("max_sessions must be positive");
        for (const auto* p : {&manifest, &products, &keywords, &buzzwords}) {
            if (!p->empty() && !std::filesystem::exists(*p)) {
                throw std::invalid_argument("path does not exist: " + p->string());
            }
        }
        if (!asset_root.empty() && !std::filesystem::is_directory(asset_root)) {
            throw std::invalid_argument("asset root is not a directory: " + asset_root.string());
        }
    }
};

/// Reads the manifest and dictionaries named in the config. Missing dictionary
/// paths mean empty dictionaries.
inline Catalog load_catalog(const ServerConfig& cfg) {
    TermDictionaries dicts;
    if (!cfg.products.empty()) dicts.products = load_dictionary(TermCategory::product, cfg.products);
    if (!cfg.keywords.empty()) dicts.keywords = load_dictionary(TermCategory::keyword, cfg.keywords);
    if (!cfg.buzzwords.empty()) dicts.buzzwords = load_dictionary(TermCategory::buzzword, cfg.buzzwords);
    return build_catalog(load_manifest(cfg.manifest), std::move(dicts));
}

/// One session plus its frame publication slot.
///
/// The session itself is touched only under `mu_`, so commands and ticks are
/// applied strictly in arrival order. Frames are published into a single
/// keep-latest slot; readers never hold up the tick loop, and a slow reader
/// simply skips to whatever frame is newest when it next looks.
class SessionChannel {
public:
    SessionChannel(std::shared_ptr<const Catalog> catalog, SessionConfig cfg, std::string id,
                   std::uint64_t ticks_per_frame)
        : session_(std::move(catalog), cfg, std::move(id)),
          ticks_per_frame_(std::max<std::uint64_t>(1, ticks_per_frame)),
          opened_at_(std::chrono::steady_clock::now()) {}

    ExecResult post(const Command& c) {
        std::lock_guard lock(mu_);
        auto r = session_.execute(c);
        if (r.ok) invalidate_frame();
        return r;
    }

    /// Advances the clock to `now` and steps once; publishes every
    /// `ticks_per_frame`-th tick.
    void tick(double now) {
        std::lock_guard lock(mu_);
        auto r = session_.execute(cmd::Tick{now});
        if (!r.ok) return;
        if (session_.engine().tick() % ticks_per_frame_ == 0) publish(to_json(session_.frame()).dump());
    }

    /// Blocks until a frame newer than `after` is available or `timeout` passes.
    std::optional<std::pair<std::uint64_t, std::shared_ptr<const std::string>>> wait_frame(
        std::uint64_t after, std::chrono::milliseconds timeout) {
        std::unique_lock lock(frame_mu_);
        bool ready = frame_cv_.wait_for(lock, timeout, [&] { return closed_ || (latest_ && seq_ > after); });
        if (!ready || closed_) return std::nullopt;
        return std::pair{seq_, latest_};
    }

    bool closed() {
        std::lock_guard lock(frame_mu_);
        return closed_;
    }

    void close() {
        {
            std::lock_guard lock(frame_mu_);
            closed_ = true;
        }
        frame_cv_.notify_all();
    }

    [[nodiscard]] double seconds_since_open() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - opened_at_).count();
    }

    template <class F>
    auto with_session(F&& fn) {
        std::lock_guard lock(mu_);
        return fn(static_cast<const Session&>(session_));
    }

private:
    void publish(std::string frame) {
        {
            std::lock_guard lock(frame_mu_);
            latest_ = std::make_shared<const std::string>(std::move(frame));
            ++seq_;
        }
        frame_cv_.notify_all();
    }

    void invalidate_frame() {
        std::lock_guard lock(frame_mu_);
        latest_.reset();
    }

    std::mutex mu_;
    Session session_;
    std::uint64_t ticks_per_frame_;
    std::chrono::steady_clock::time_point opened_at_;

    std::mutex frame_mu_;
    std::condition_variable frame_cv_;
    std::shared_ptr<const std::string> latest_;
    std::uint64_t seq_ = 0;
    bool closed_ = false;
};

class SessionHub {
public:
    SessionHub(std::shared_ptr<const Catalog> catalog, const ServerConfig& cfg) : catalog_(std::move(catalog)), cfg_(cfg) {}

    ~SessionHub() { stop_ticker(); }

    /// Returns the new session id, or nullopt when at capacity.
    std::optional<std::string> open(std::optional<std::uint64_t> seed) {
        std::lock_guard lock(mu_);
        if (sessions_.size() >= cfg_.max_sessions) return std::nullopt;
        auto id = "s" + std::to_string(next_id_++);
        SessionConfig sc = cfg_.session;
        sc.sim.seed = seed.value_or(cfg_.seed);
        auto ticks_per_frame = static_cast<std::uint64_t>(std::llround(cfg_.tick_rate() / cfg_.frame_rate));
        sessions_.emplace(id, std::make_shared<SessionChannel>(catalog_, sc, id, ticks_per_frame));
        return id;
    }

    std::shared_ptr<SessionChannel> get(const std::string& id) const {
        std::lock_guard lock(mu_);
        auto it = sessions_.find(id);
        return it == sessions_.end() ? nullptr : it->second;
    }

    std::vector<std::shared_ptr<SessionChannel>> all() const {
        std::lock_guard lock(mu_);
        std::vector<std::shared_ptr<SessionChannel>> out;
        for (const auto& [_, s] : sessions_) out.push_back(s);
        return out;
    }

    /// Fixed-rate loop. A late loop catches up tick by tick rather than skipping.
    void start_ticker() {
        if (ticker_.joinable()) return;
        running_ = true;
        ticker_ = std::thread([this] {
            const auto period = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                std::chrono::duration<double>(cfg_.session.sim.dt));
            auto next = std::chrono::steady_clock::now();
            std::map<SessionChannel*, std::uint64_t> ticks_done;
            while (running_) {
                next += period;
                for (const auto& s : all()) {
                    auto& done = ticks_done[s.get()];
                    ++done;
                    s->tick(static_cast<double>(done) * cfg_.session.sim.dt);
                }
                std::this_thread::sleep_until(next);
            }
        });
    }

    void stop_ticker() {
        running_ = false;
        if (ticker_.joinable()) ticker_.join();
        for (const auto& s : all()) s->close();
    }

private:
    std::shared_ptr<const Catalog> catalog_;
    const ServerConfig& cfg_;
    mutable std::mutex mu_;
    std::map<std::string, std::shared_ptr<SessionChannel>> sessions_;
    std::uint64_t next_id_ = 1;
    std::atomic<bool> running_{false};
    std::thread ticker_;
};

namespace detail {

inline void send_json(httplib::Response& res, const nlohmann::json& j, int status = 200) {
    res.status = status;
    res.set_content(j.dump(), "application/json");
}

inline void send_error(httplib::Response& res, int status, const std::string& message) {
    send_json(res, {{"status", "error"}, {"message", message}}, status);
}

inline const char* image_content_type(const std::filesystem::path& p) {
    auto ext = lower_ascii(p.extension().string());
    if (ext == ".png") return "image/png";
    if (ext == ".jpg" || ext == ".jpeg") return "image/jpeg";
    if (ext == ".gif") return "image/gif";
    if (ext == ".svg") return "image/svg+xml";
    if (ext == ".webp") return "image/webp";
    return "application/octet-stream";
}

/// Relative paths without `..` only.
inline bool safe_relative(const std::filesystem::path& p) {
    if (p.empty() || p.is_absolute() || p.has_root_name()) return false;
    for (const auto& part : p) {
        if (part == "..") return false;
    }
    return true;
}

}  // namespace detail

/// HTTP front end over an immutable catalog.
///
///   GET  /corpus                          deck summaries, ordered by deck id
///   GET  /config                          timings, palette, axis order
///   GET  /decks/{id}                      tooltip payload
///   GET  /decks/{id}/slides/{n}/image     slide image from the asset root
///   POST /sessions                        {"seed"?} -> session id
///   POST /sessions/{id}/commands          command -> {status, message, state_version}
///   GET  /sessions/{id}/frames            NDJSON frame stream (?limit=N)
///   GET  /sessions/{id}/frame             current frame, built on request
///   GET  /sessions/{id}/log               NDJSON command log
class ApiServer {
public:
    ApiServer(std::shared_ptr<const Catalog> catalog, ServerConfig cfg)
        : catalog_(std::move(catalog)), cfg_(std::move(cfg)), hub_(catalog_, cfg_) {
        cfg_.validate();
        corpus_body_ = corpus_json(*catalog_).dump();
        routes();
        if (cfg_.run_ticker) hub_.start_ticker();
    }

    ~ApiServer() { stop(); }

    ApiServer(const ApiServer&) = delete;
    ApiServer& operator=(const ApiServer&) = delete;

    bool listen() { return http_.listen(cfg_.host, cfg_.port); }
    int bind_to_any_port() { return http_.bind_to_any_port(cfg_.host); }
    bool listen_after_bind() { return http_.listen_after_bind(); }
    void wait_until_ready() const { http_.wait_until_ready(); }

    void stop() {
        hub_.stop_ticker();
        if (http_.is_running()) http_.stop();
    }

    SessionHub& hub() { return hub_; }
    httplib::Server& http() { return http_; }
    const Catalog& catalog() const { return *catalog_; }

private:
    void routes() {
        http_.Get("/corpus", [this](const httplib::Request&, httplib::Response& res) {
            res.set_content(corpus_body_, "application/json");
        });

        http_.Get("/config", [this](const httplib::Request&, httplib::Response& res) {
            const auto& s = cfg_.session;
            nlohmann::json palette = nlohmann::json::array();
            for (auto hex : Palette::kHex) palette.push_back(hex);
            detail::send_json(res, {{"axis_order", axis_order_json()},
                                    {"palette", palette},
                                    {"expand_seconds", s.expand_seconds},
                                    {"pop_seconds", s.pop_seconds},
                                    {"idle_seconds", s.idle_seconds},
                                    {"frame_rate", cfg_.frame_rate},
                                    {"tick_rate", cfg_.tick_rate()},
                                    {"deck_radius", s.deck_radius},
                                    {"slide_radius", s.slide_radius}});
        });

        http_.Get(R"(/decks/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
            auto i = catalog_->find(req.matches[1]);
            if (!i) return detail::send_error(res, 404, "unknown deck '" + std::string(req.matches[1]) + "'");
            detail::send_json(res, deck_details(*catalog_, *i));
        });

        http_.Get(R"(/decks/([^/]+)/slides/(\d+)/image)", [this](const httplib::Request& req, httplib::Response& res) {
            auto i = catalog_->find(req.matches[1]);
            if (!i) return detail::send_error(res, 404, "unknown deck");
            std::size_t n = std::stoul(req.matches[2]);
            const auto& slides = catalog_->decks[*i].slides;
            if (n >= slides.size()) return detail::send_error(res, 404, "slide index out of range");
            std::filesystem::path rel(slides[n].image_ref);
            if (!detail::safe_relative(rel)) return detail::send_error(res, 403, "image path escapes the asset root");
            auto root = cfg_.asset_root.empty() ? cfg_.manifest.parent_path() : cfg_.asset_root;
            auto path = root / rel;
            if (!std::filesystem::is_regular_file(path)) return detail::send_error(res, 404, "image not found");
            res.set_content(read_file(path), detail::image_content_type(path));
        });

        http_.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
            std::optional<std::uint64_t> seed;
            if (!req.body.empty()) {
                auto body = nlohmann::json::parse(req.body, nullptr, false);
                if (body.is_discarded() || !body.is_object()) return detail::send_error(res, 400, "body must be a JSON object");
                if (auto s = body.find("seed"); s != body.end() && !s->is_null()) {
                    if (!s->is_number_unsigned()) return detail::send_error(res, 400, "seed must be a non-negative integer");
                    seed = s->get<std::uint64_t>();
                }
            }
            auto id = hub_.open(seed);
            if (!id) return detail::send_error(res, 503, "session capacity exceeded");
            detail::send_json(res,
                              {{"session_id", *id},
                               {"frames", "/sessions/" + *id + "/frames"},
                               {"commands", "/sessions/" + *id + "/commands"}},
                              201);
        });

        http_.Post(R"(/sessions/([^/]+)/commands)", [this](const httplib::Request& req, httplib::Response& res) {
            auto s = hub_.get(req.matches[1]);
            if (!s) return detail::send_error(res, 404, "unknown session");
            Command c;
            try {
                c = command_from_string(req.body);
            } catch (const std::invalid_argument& e) {
                auto version = s->with_session([](const Session& x) { return x.version(); });
                return detail::send_json(
                    res, {{"status", "error"}, {"message", e.what()}, {"state_version", version}}, 400);
            }
            auto r = s->post(c);
            detail::send_json(res, to_json(r), r.ok ? 200 : 422);
        });

        http_.Get(R"(/sessions/([^/]+)/frame)", [this](const httplib::Request& req, httplib::Response& res) {
            auto s = hub_.get(req.matches[1]);
            if (!s) return detail::send_error(res, 404, "unknown session");
            detail::send_json(res, s->with_session([](const Session& x) { return to_json(x.frame()); }));
        });

        http_.Get(R"(/sessions/([^/]+)/log)", [this](const httplib::Request& req, httplib::Response& res) {
            auto s = hub_.get(req.matches[1]);
            if (!s) return detail::send_error(res, 404, "unknown session");
            res.set_content(s->with_session([](const Session& x) { return command_log_text(x.log()); }),
                            "application/x-ndjson");
        });

        http_.Get(R"(/sessions/([^/]+)/frames)", [this](const httplib::Request& req, httplib::Response& res) {
            auto s = hub_.get(req.matches[1]);
            if (!s) return detail::send_error(res, 404, "unknown session");
            std::uint64_t limit = 0;  // 0 = unbounded
            if (req.has_param("limit")) {
                const auto text = req.get_param_value("limit");
                if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
                    return detail::send_error(res, 400, "limit must be a non-negative integer");
                }
                limit = std::stoull(text);
            }
            auto state = std::make_shared<std::pair<std::uint64_t, std::uint64_t>>(0, 0);  // last seq, sent
            res.set_chunked_content_provider(
                "application/x-ndjson", [s, limit, state](std::size_t, httplib::DataSink& sink) {
                    auto f = s->wait_frame(state->first, std::chrono::milliseconds(250));
                    if (!f) {
                        if (s->closed()) sink.done();
                        return sink.is_writable();
                    }
                    state->first = f->first;
                    std::string line = *f->second;
                    line.push_back('\n');
                    if (!sink.write(line.data(), line.size())) return false;
                    if (limit != 0 && ++state->second >= limit) sink.done();
                    return true;
                });
        });
    }

    std::shared_ptr<const Catalog> catalog_;
    ServerConfig cfg_;
    SessionHub hub_;
    httplib::Server http_;
    std::string corpus_body_;
};

}  // namespace skyglyphs
