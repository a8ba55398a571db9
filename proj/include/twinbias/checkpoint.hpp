#pragma once
#include <optional>
#include <string>

#include "twinbias/io_util.hpp"
#include "twinbias/scan.hpp"

namespace twinbias {

// Persistent progress of a CSV scan.  digest covers the first output_bytes
// bytes of the output file, header line included, so a resume can verify the
// prefix it continues from.
struct checkpoint_state {
  int schema_version = 1;
  u64 limit = 0;
  u64 segment_len = 0;
  u64 scanned_up_to = 0;
  u64 output_bytes = 0;
  u64 digest = fnv_offset;
  scan_counters counters;
};

// atomic write: temp file in the same directory, fsync, rename over the target
void save_checkpoint(const std::string& path, const checkpoint_state& st);

// nullopt when the file does not exist; corrupt or wrong-schema files are a
// state error
std::optional<checkpoint_state> load_checkpoint(const std::string& path);

struct checkpoint_config {
  std::string path;
  u64 every = u64(1) << 28;  // integers scanned between checkpoint writes
  i64 halt_after = -1;       // stop cleanly after N writes (test hook); -1 = run to completion
};

struct scan_run_result {
  scan_counters counters;
  bool halted = false;
  u64 checkpoints_written = 0;
};

// Scan to a CSV file, optionally checkpointed.  With a checkpoint config the
// run resumes from an existing state file (validating limit, segment length
// and the output prefix digest) and removes the state file on completion.
scan_run_result scan_to_csv(u64 limit, const scan_options& base, const std::string& out_path,
                            const checkpoint_config* ckpt);

inline constexpr const char* csv_header = "p,phi_minus,phi_plus,delta,class,equal_flag";
std::string csv_line(const twin_record& rec);  // record serialized without newline

}  // namespace twinbias
