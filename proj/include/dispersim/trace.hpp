#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dispersim/configuration.hpp"
#include "dispersim/engine.hpp"

namespace dispersim {

// One JSON object per step: {"t": ..., "agents": [{id, node, mode, slot,
// level, leaderid, last, inport, pin, pout}, ...]}, agents ascending by id.
// Field order is fixed so identical runs serialize byte-identically.
std::string trace_record_line(const Configuration& c);

std::vector<Configuration> read_trace(std::istream& in);
std::vector<Configuration> read_trace_file(const std::string& path);

// Streams every configuration of a run to a JSONL file.
class JsonlTraceSink final : public TraceSink {
 public:
  explicit JsonlTraceSink(const std::string& path);
  ~JsonlTraceSink() override;
  void record(const Configuration& c) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Collects configurations in memory (tests, replay checks).
class CollectingTraceSink final : public TraceSink {
 public:
  void record(const Configuration& c) override { configs.push_back(c); }
  std::vector<Configuration> configs;
};

// Single JSON object with the RunResult fields; stable field order.
std::string run_result_json(const RunResult& r);

}  // namespace dispersim
