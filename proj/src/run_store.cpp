#include "ampo/run_store.hpp"

#include "ampo/errors.hpp"

#include <chrono>

namespace ampo {

namespace fs = std::filesystem;

RunStore::RunStore(const fs::path& runs_root, const std::string& run_id)
    : dir_(runs_root / run_id) {
    if (fs::exists(dir_)) throw ConfigError("run directory already exists: " + dir_.string());
    fs::create_directories(dir_ / "candidates");
    events_out_.open(dir_ / "events.log", std::ios::trunc);
    if (!events_out_) throw ConfigError("cannot open events.log under " + dir_.string());
}

void RunStore::write_config(const RunConfig& config, Strategy strategy) {
    nlohmann::json frozen = config_to_json(config);
    frozen["strategy"] = to_string(strategy);
    std::ofstream out(dir_ / "config", std::ios::trunc);
    if (!out) throw ConfigError("cannot write config under " + dir_.string());
    out << frozen.dump(2) << '\n';
}

void RunStore::append_event(const Event& event) {
    events_out_ << event.to_line() << '\n';
    events_out_.flush();
}

void RunStore::write_candidate_text(const std::string& id, const std::string& text) {
    std::ofstream out(candidate_path(id), std::ios::trunc);
    if (!out) throw ConfigError("cannot write candidate text for " + id);
    out << text;
    if (text.empty() || text.back() != '\n') out << '\n';
}

void RunStore::write_capture(const Gateway& gateway) {
    gateway.write_capture((dir_ / "capture.log").string());
}

fs::path RunStore::candidate_path(const std::string& id) const {
    return dir_ / "candidates" / (id + ".txt");
}

std::vector<Event> RunStore::read_events(const fs::path& run_dir) {
    const fs::path path = run_dir / "events.log";
    std::ifstream in(path);
    if (!in) throw ConfigError("no events.log in " + run_dir.string());
    std::vector<Event> events;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            events.push_back(Event::from_line(line));
        } catch (const ConfigError& e) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (events.empty()) throw ConfigError("no events in " + path.string());
    return events;
}

std::string make_run_id(Strategy strategy, std::uint64_t seed) {
    const auto now = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::system_clock::now().time_since_epoch())
                         .count();
    return std::string(to_string(strategy)) + "-s" + std::to_string(seed) + "-" +
           std::to_string(now);
}

}  // namespace ampo
