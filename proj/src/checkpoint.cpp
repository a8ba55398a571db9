#include "twinbias/checkpoint.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <vector>

#include <unistd.h>

#include <json.hpp>

namespace twinbias {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json residue_map_to_json(const std::map<std::pair<u64, u64>, u64>& m) {
  ordered_json arr = ordered_json::array();
  for (const auto& [key, count] : m) arr.push_back({key.first, key.second, count});
  return arr;
}

std::map<std::pair<u64, u64>, u64> residue_map_from_json(const ordered_json& arr) {
  std::map<std::pair<u64, u64>, u64> m;
  for (const auto& e : arr) m[{e.at(0).get<u64>(), e.at(1).get<u64>()}] = e.at(2).get<u64>();
  return m;
}

}  // namespace

void save_checkpoint(const std::string& path, const checkpoint_state& st) {
  ordered_json j;
  j["schema_version"] = st.schema_version;
  j["limit"] = st.limit;
  j["segment_len"] = st.segment_len;
  j["scanned_up_to"] = st.scanned_up_to;
  j["output_bytes"] = st.output_bytes;
  j["digest"] = to_hex16(st.digest);
  ordered_json c;
  c["limit"] = st.counters.limit;
  c["pi2"] = st.counters.pi2;
  c["pie"] = st.counters.pie;
  c["piu"] = st.counters.piu;
  c["pieq"] = st.counters.pieq;
  c["residue_hits"] = residue_map_to_json(st.counters.residue_hits);
  c["twin_residue_hits"] = residue_map_to_json(st.counters.twin_residue_hits);
  j["counters"] = c;

  const std::string body = j.dump(2) + "\n";
  const std::string tmp = path + ".tmp";
  {
    std::FILE* f = std::fopen(tmp.c_str(), "wb");
    if (!f) raise(errkind::state, "cannot open checkpoint temp file: " + tmp);
    const bool ok = std::fwrite(body.data(), 1, body.size(), f) == body.size() &&
                    std::fflush(f) == 0 && ::fsync(fileno(f)) == 0;
    std::fclose(f);
    if (!ok) raise(errkind::state, "short write to checkpoint temp file: " + tmp);
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) raise(errkind::state, "cannot move checkpoint into place: " + ec.message());
}

std::optional<checkpoint_state> load_checkpoint(const std::string& path) {
  if (!fs::exists(path)) return std::nullopt;
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(errkind::state, "cannot read checkpoint file: " + path);
  const ordered_json j = ordered_json::parse(in, nullptr, false);
  if (j.is_discarded()) raise(errkind::state, "corrupt checkpoint file: " + path);
  try {
    checkpoint_state st;
    st.schema_version = j.at("schema_version").get<int>();
    if (st.schema_version != 1) raise(errkind::state, "unsupported checkpoint schema version");
    st.limit = j.at("limit").get<u64>();
    st.segment_len = j.at("segment_len").get<u64>();
    st.scanned_up_to = j.at("scanned_up_to").get<u64>();
    st.output_bytes = j.at("output_bytes").get<u64>();
    st.digest = from_hex16(j.at("digest").get<std::string>());
    const auto& c = j.at("counters");
    st.counters.limit = c.at("limit").get<u64>();
    st.counters.pi2 = c.at("pi2").get<u64>();
    st.counters.pie = c.at("pie").get<u64>();
    st.counters.piu = c.at("piu").get<u64>();
    st.counters.pieq = c.at("pieq").get<u64>();
    st.counters.residue_hits = residue_map_from_json(c.at("residue_hits"));
    st.counters.twin_residue_hits = residue_map_from_json(c.at("twin_residue_hits"));
    return st;
  } catch (const error&) {
    throw;
  } catch (const std::exception& e) {
    raise(errkind::state, std::string("malformed checkpoint contents: ") + e.what());
  }
}

std::string csv_line(const twin_record& rec) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%llu,%llu,%llu,%lld,%c,%d",
                (unsigned long long)rec.p, (unsigned long long)rec.phi_minus,
                (unsigned long long)rec.phi_plus, (long long)rec.delta,
                rec.cls == twin_class::exceptional ? 'E' : 'U', rec.equal ? 1 : 0);
  return buf;
}

namespace {

struct halt_signal {};

u64 file_digest_prefix(std::FILE* f, u64 nbytes) {
  std::vector<char> buf(1 << 20);
  u64 h = fnv_offset, left = nbytes;
  std::rewind(f);
  while (left > 0) {
    const size_t want = size_t(std::min<u64>(left, buf.size()));
    const size_t got = std::fread(buf.data(), 1, want, f);
    if (got == 0) raise(errkind::state, "output file shorter than checkpoint says");
    h = fnv1a(buf.data(), got, h);
    left -= got;
  }
  return h;
}

}  // namespace

scan_run_result scan_to_csv(u64 limit, const scan_options& base, const std::string& out_path,
                            const checkpoint_config* ckpt) {
  scan_options opt = base;
  scan_run_result result;

  u64 start = 5;
  u64 bytes = 0;
  u64 digest = fnv_offset;
  bool resuming = false;

  if (ckpt) {
    if (const auto loaded = load_checkpoint(ckpt->path)) {
      const checkpoint_state& st = *loaded;
      if (st.limit != limit)
        raise(errkind::state, "checkpoint was written for a different limit");
      if (st.segment_len != opt.segment_len)
        raise(errkind::state, "checkpoint was written for a different segment length");
      if (!fs::exists(out_path))
        raise(errkind::state, "checkpoint exists but the output file does not");
      if (fs::file_size(out_path) < st.output_bytes)
        raise(errkind::state, "output file shorter than checkpoint says");
      {
        std::FILE* f = std::fopen(out_path.c_str(), "rb");
        if (!f) raise(errkind::state, "cannot reopen output file: " + out_path);
        const u64 h = file_digest_prefix(f, st.output_bytes);
        std::fclose(f);
        if (h != st.digest)
          raise(errkind::state, "output file prefix does not match checkpoint digest");
      }
      fs::resize_file(out_path, st.output_bytes);  // drop bytes past the last checkpoint
      start = st.scanned_up_to + 1;
      bytes = st.output_bytes;
      digest = st.digest;
      opt.seed = st.counters;
      resuming = true;
    }
  }

  std::FILE* out = std::fopen(out_path.c_str(), resuming ? "ab" : "wb");
  if (!out) raise(errkind::argument, "cannot open output file: " + out_path);
  const auto put = [&](const std::string& s) {
    if (std::fwrite(s.data(), 1, s.size(), out) != s.size()) {
      std::fclose(out);
      raise(errkind::state, "short write to output file: " + out_path);
    }
    digest = fnv1a(s.data(), s.size(), digest);
    bytes += s.size();
  };

  if (!resuming) put(std::string(csv_header) + "\n");

  if (resuming && start > limit) {
    // nothing left to scan; finish the lifecycle below
    result.counters = opt.seed;
    result.counters.limit = limit;
  } else {
    opt.start = std::max<u64>(start, 5);
    const u64 every = ckpt && ckpt->every > 0 ? ckpt->every : u64(1) << 28;
    u64 next_mark = (opt.start / every + 1) * every;
    opt.on_record = [&](const twin_record& rec) {
      std::string line = csv_line(rec);
      line += '\n';
      put(line);
    };
    opt.on_segment = [&](u64 up_to, const scan_counters& totals) {
      if (!ckpt || up_to < next_mark) return;
      if (std::fflush(out) != 0) raise(errkind::state, "cannot flush output file");
      checkpoint_state st;
      st.limit = limit;
      st.segment_len = opt.segment_len;
      st.scanned_up_to = up_to;
      st.output_bytes = bytes;
      st.digest = digest;
      st.counters = totals;
      save_checkpoint(ckpt->path, st);
      ++result.checkpoints_written;
      // collapse any marks the segment overran, keeping the cadence absolute
      next_mark = (up_to / every + 1) * every;
      if (ckpt->halt_after >= 0 && result.checkpoints_written >= u64(ckpt->halt_after))
        throw halt_signal{};
    };
    try {
      result.counters = scan(limit, opt);
    } catch (const halt_signal&) {
      result.halted = true;
    } catch (...) {
      std::fclose(out);
      throw;
    }
  }

  if (std::fflush(out) != 0 || ::fsync(fileno(out)) != 0) {
    std::fclose(out);
    raise(errkind::state, "cannot flush output file: " + out_path);
  }
  std::fclose(out);
  if (ckpt && !result.halted) {
    std::error_code ec;
    fs::remove(ckpt->path, ec);
  }
  return result;
}

}  // namespace twinbias
