// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>

namespace hst::link {

struct McsEntry {
  int index = 0;
  int bits_per_symbol = 0;
  double code_rate = 0.0;
  double eesm_beta = 1.0;
  double threshold_db = 0.0;  // effective SINR at 50% BLER
};

// 18 (64-QAM, R=822/1024) and 24 (256-QAM, R=841/1024). Throws ConfigError
// for anything else.
const McsEntry& mcs_entry(int index);

inline constexpr double kDefaultOverhead = 0.75;
inline constexpr double kBlerSlopeDb = 0.3;

// -beta ln(mean exp(-sinr / beta)), returned in dB.
double eesm_db(std::span<const double> sinr_linear, double beta);
double block_error_rate(double effective_sinr_db, const McsEntry& mcs, double slope_db = kBlerSlopeDb);
double transport_block_bits(int prbs, int rank, const McsEntry& mcs, double overhead = kDefaultOverhead);
// Decoded bits per second for one slot given its post-equalization SINRs.
double slot_throughput_bps(std::span<const double> sinr_linear, const McsEntry& mcs, int prbs, int rank,
                           double slot_seconds = 125e-6, double overhead = kDefaultOverhead);

// BICM capacity (bits per complex symbol) of Gray-labelled square QAM on AWGN.
double bicm_capacity(int bits_per_symbol, double snr_db);
// SNR at which BICM capacity equals bits_per_symbol * code_rate, plus gap_db.
double bicm_threshold_db(int bits_per_symbol, double code_rate, double gap_db = 1.0);

}  // namespace hst::link
