#include "twinbias/scan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <future>

#include "twinbias/kernels.hpp"
#include "twinbias/sieve.hpp"

namespace twinbias {

void scan_counters::merge(const scan_counters& other) {
  limit = std::max(limit, other.limit);
  pi2 += other.pi2;
  pie += other.pie;
  piu += other.piu;
  pieq += other.pieq;
  for (const auto& [key, v] : other.residue_hits) residue_hits[key] += v;
  for (const auto& [key, v] : other.twin_residue_hits) twin_residue_hits[key] += v;
}

twin_class classify(u64 p, u64 phi_minus, u64 phi_plus) {
  return (p >= 5 && phi_minus < phi_plus) ? twin_class::exceptional : twin_class::unexceptional;
}

bool density_order_matches(u64 p, u64 phi_minus, u64 phi_plus) {
  if (p < 5) raise(errkind::range, "density_order_matches: p must be >= 5");
  const bool raw_ge = phi_minus >= phi_plus;
  const bool share_ge = u128(phi_minus) * (p + 1) >= u128(phi_plus) * (p - 1);
  return raw_ge == share_ge;
}

bool density_order_matches(u64 p) {
  return density_order_matches(p, totient_of(p - 1), totient_of(p + 1));
}

bool coprime_density_condition(u64 p) {
  if (p < 5) raise(errkind::range, "coprime_density_condition: p must be >= 5");
  // left side (1/2) prod over q | p-1, right side (1/3) prod over q | p+1,
  // both over primes q >= 5, compared as cross-multiplied u128 products.
  // For twin p the products of odd primes involved stay below p+1 <= 2^63,
  // so each cross product fits in 128 bits with room to spare.
  u64 lnum = 1, lden = 2, rnum = 1, rden = 3;
  for (auto [q, e] : factorize(p - 1))
    if (q >= 5) {
      lnum *= q - 1;
      lden = checked_mul(lden, q);
    }
  for (auto [q, e] : factorize(p + 1))
    if (q >= 5) {
      rnum *= q - 1;
      rden = checked_mul(rden, q);
    }
  return u128(lnum) * rden < u128(rnum) * lden;
}

double prime_divisor_log_sum(u64 n, u64 threshold) {
  if (threshold < 2) raise(errkind::argument, "prime_divisor_log_sum: threshold must be >= 2");
  double s = 0.0;
  for (auto [r, e] : factorize(n))
    if (r >= threshold) s += std::log1p(1.0 / (double(r) - 1.0));
  return s;
}

namespace {

struct segment_result {
  std::vector<twin_record> records;
  scan_counters counters;
  u64 scanned_up_to = 0;
};

struct segment_job {
  const totient_sieve* sieve;
  const scan_options* opt;
  u64 s, e;  // candidate range [s, e)

  segment_result run() const {
    segment_result out;
    const u64 base = s - 1;
    const u64 len = e - s + 3;  // covers [s-1, e+2)
    std::vector<u64> phi(len), scratch(len);
    sieve->fill(base, len, phi.data(), scratch.data());
    const kernel_ops& k = active_kernels();
    std::vector<u64> words((len + 63) / 64);
    k.prime_mask(phi.data(), base, len, words.data());

    scan_counters& c = out.counters;
    for (const auto& key : opt->exceptional_residues) c.residue_hits[key] = 0;
    for (const auto& key : opt->twin_residues) c.twin_residue_hits[key] = 0;

    const u64 nw = words.size();
    for (u64 j = 0; j < nw; ++j) {
      u64 cand = words[j] & ((words[j] >> 2) | (j + 1 < nw ? words[j + 1] << 62 : u64(0)));
      while (cand) {
        const u64 b = u64(__builtin_ctzll(cand));
        cand &= cand - 1;
        const u64 i = (j << 6) + b;
        if (i < 1 || i > e - s) continue;  // outside the candidate window
        const u64 p = base + i;
        twin_record rec;
        rec.p = p;
        rec.phi_minus = phi[i - 1];
        rec.phi_plus = phi[i + 1];
        rec.delta = i64(rec.phi_minus) - i64(rec.phi_plus);
        rec.cls = classify(p, rec.phi_minus, rec.phi_plus);
        rec.equal = rec.phi_minus == rec.phi_plus;
        ++c.pi2;
        if (rec.cls == twin_class::exceptional) {
          ++c.pie;
          for (const auto& key : opt->exceptional_residues)
            if (p % key.first == key.second) ++c.residue_hits[key];
        } else {
          ++c.piu;
          if (rec.equal) ++c.pieq;
        }
        for (const auto& key : opt->twin_residues)
          if (p % key.first == key.second) ++c.twin_residue_hits[key];
        out.records.push_back(rec);
      }
    }
    out.scanned_up_to = e - 1;
    return out;
  }
};

void validate_residues(const std::vector<std::pair<u64, u64>>& v, const char* what) {
  for (const auto& [m, r] : v) {
    if (m < 2) raise(errkind::argument, std::string(what) + ": modulus must be >= 2");
    if (r >= m) raise(errkind::argument, std::string(what) + ": residue must be < modulus");
  }
}

}  // namespace

scan_counters scan(u64 limit, const scan_options& options) {
  if (limit < 5) raise(errkind::range, "scan: limit must be >= 5");
  if (limit > (u64(1) << 63) - 4) raise(errkind::range, "scan: limit too large");
  if (options.segment_len < (u64(1) << 16))
    raise(errkind::range, "scan: segment_len must be >= 65536");
  if (options.threads == 0) raise(errkind::argument, "scan: threads must be >= 1");
  if (options.start < 5) raise(errkind::range, "scan: start must be >= 5");
  validate_residues(options.exceptional_residues, "scan residue class");
  validate_residues(options.twin_residues, "scan residue class");

  scan_counters total = options.seed;
  total.limit = limit;
  for (const auto& key : options.exceptional_residues) total.residue_hits[key] += 0;
  for (const auto& key : options.twin_residues) total.twin_residue_hits[key] += 0;
  if (options.start > limit) {
    if (options.on_segment) options.on_segment(limit, total);
    return total;
  }

  const totient_sieve sieve(limit + 3);
  const u64 L = options.segment_len;
  const u64 k_first = options.start / L, k_last = limit / L;

  const auto make_job = [&](u64 k) {
    segment_job job;
    job.sieve = &sieve;
    job.opt = &options;
    job.s = std::max(options.start, k * L);
    job.e = std::min(limit + 1, (k + 1) * L);
    return job;
  };
  const auto emit = [&](segment_result&& res) {
    if (options.on_record)
      for (const auto& rec : res.records) options.on_record(rec);
    total.merge(res.counters);
    if (options.on_segment) options.on_segment(res.scanned_up_to, total);
  };

  if (options.threads <= 1) {
    for (u64 k = k_first; k <= k_last; ++k) {
      segment_job job = make_job(k);
      if (job.s >= job.e) continue;
      emit(job.run());
    }
    return total;
  }

  // bounded in-flight window of worker futures, consumed strictly in order
  std::deque<std::future<segment_result>> window;
  u64 next_launch = k_first;
  const auto launch_more = [&] {
    while (window.size() < options.threads && next_launch <= k_last) {
      segment_job job = make_job(next_launch++);
      if (job.s >= job.e) continue;
      window.push_back(std::async(std::launch::async, [job] { return job.run(); }));
    }
  };
  launch_more();
  while (!window.empty()) {
    segment_result res = window.front().get();
    window.pop_front();
    launch_more();
    emit(std::move(res));
  }
  return total;
}

void ratio_series(u64 limit, const scan_options& base,
                  const std::function<void(const ratio_row&)>& fn) {
  scan_options opt = base;
  opt.start = 5;
  opt.seed = {};
  u64 pi2_run = 0, pie_run = 0;
  opt.on_record = [&](const twin_record& rec) {
    ++pi2_run;
    if (rec.cls == twin_class::exceptional) {
      ++pie_run;
      fn({pie_run, rec.p, pie_run, pi2_run});
    }
  };
  opt.on_segment = nullptr;
  scan(limit, opt);
}

u64 residue_count_limit(u64 limit, u64 modulus, u64 residue, const scan_options& base) {
  if (modulus < 2) raise(errkind::argument, "residue_count: modulus must be >= 2");
  if (residue >= modulus) raise(errkind::argument, "residue_count: residue must be < modulus");
  scan_options opt = base;
  opt.start = 5;
  opt.seed = {};
  u64 hits = 0;
  opt.on_record = [&](const twin_record& rec) {
    if (rec.cls == twin_class::exceptional && rec.p % modulus == residue) ++hits;
  };
  opt.on_segment = nullptr;
  scan(limit, opt);
  return hits;
}

u64 residue_count_first_k(u64 k, u64 modulus, u64 residue, const scan_options& base) {
  if (modulus < 2) raise(errkind::argument, "residue_count: modulus must be >= 2");
  if (residue >= modulus) raise(errkind::argument, "residue_count: residue must be < modulus");
  if (k == 0) return 0;
  u64 hits = 0, seen = 0;
  u64 lo = 5, hi = u64(1) << 22;
  while (seen < k) {
    scan_options opt = base;
    opt.start = lo;
    opt.seed = {};
    opt.on_record = [&](const twin_record& rec) {
      if (rec.cls == twin_class::exceptional && seen < k) {
        ++seen;
        if (rec.p % modulus == residue) ++hits;
      }
    };
    opt.on_segment = nullptr;
    scan(hi, opt);
    if (seen < k) {
      if (hi > (u64(1) << 56)) raise(errkind::resource, "residue_count: first-k scope too deep");
      lo = hi + 1;
      hi *= 4;
    }
  }
  return hits;
}

std::string format_ratio(u64 pie, u64 pi2) {
  if (pi2 == 0) raise(errkind::argument, "format_ratio: zero denominator");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", double(pie) / double(pi2));
  return buf;
}

}  // namespace twinbias
