#pragma once

#include <string>
#include <vector>

#include "nivsum/decompose.hpp"
#include "nivsum/rangelab.hpp"

namespace nivsum {

// JSON wire formats. String-based so the JSON library stays a private
// implementation detail of the core library.
//
//   DigitString   {"base": g, "digits": [d0, d1, ...]}        (little-endian)
//   Certificate   {"g", "n", "method", "summands", "provenance"}
//                 provenance = {"triple", "split_lengths", "witnesses", "h"},
//                 absent fields omitted. Field order is stable; the verifier
//                 consumes exactly this layout.
//
// indent < 0 emits compact single-line JSON; >= 0 pretty-prints.

std::string digit_string_to_json(const DigitString& n, int indent = -1);
DigitString digit_string_from_json(const std::string& text);

std::string certificate_to_json(const DecompositionCert& cert, int indent = -1);
DecompositionCert certificate_from_json(const std::string& text);

// CSV with one exception per row plus a trailing JSON stats block.
std::string report_to_csv(const SieveReport& rep);
std::string report_to_json(const SieveReport& rep, int indent = -1);

// CSV rows (x, count, c_estimate), header included.
std::string niven_counts_to_csv(const std::vector<NivenCount>& rows);

}  // namespace nivsum
