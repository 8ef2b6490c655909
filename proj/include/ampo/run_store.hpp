#pragma once

#include "ampo/events.hpp"
#include "ampo/gateway.hpp"

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace ampo {

// On-disk layout of one run:
//   runs/<run_id>/config           frozen RunConfig (JSON)
//   runs/<run_id>/events.log       one Event per line
//   runs/<run_id>/candidates/<id>.txt
//   runs/<run_id>/capture.log      gateway capture
class RunStore {
public:
    // Creates the directory tree; refuses to reuse an existing run dir.
    RunStore(const std::filesystem::path& runs_root, const std::string& run_id);

    void write_config(const RunConfig& config, Strategy strategy);
    void append_event(const Event& event);  // flushed per line
    void write_candidate_text(const std::string& id, const std::string& text);
    void write_capture(const Gateway& gateway);

    const std::filesystem::path& dir() const { return dir_; }
    std::filesystem::path candidate_path(const std::string& id) const;

    // --- reading a finished run ---
    static std::vector<Event> read_events(const std::filesystem::path& run_dir);

private:
    std::filesystem::path dir_;
    std::ofstream events_out_;
};

// Fresh unique id: <strategy>-s<seed>-<epoch_ms>.
std::string make_run_id(Strategy strategy, std::uint64_t seed);

}  // namespace ampo
