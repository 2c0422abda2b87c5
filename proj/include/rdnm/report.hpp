#pragma once

// JSON documents produced by the command-line tool. Every rational is a
// "p/q" string so that output can be read back without loss.

#include <string>

#include "rdnm/bounds.hpp"
#include "rdnm/decomposition.hpp"
#include "rdnm/driver.hpp"
#include "rdnm/p1ca.hpp"
#include "rdnm/system.hpp"

namespace rdnm {

inline constexpr const char* kMpsSchemaVersion = "mps/1";
inline constexpr const char* kP1caSchemaVersion = "p1ca/1";
inline constexpr const char* kSolveReportSchemaVersion = "solve-report/1";
inline constexpr const char* kGMatrixSchemaVersion = "gmatrix/1";

/// Documents which encoding-size convention the parameters derive from.
inline constexpr const char* kEncodingConvention =
    "bits(num)+bits(den) per coefficient plus bits(1-based var index)+bits(exponent) per factor";

std::string solve_report_json(const SolveReport& report);
std::string gmatrix_json(const GMatrix& g);
std::string decomposition_json(const MonotoneSystem& sys, const Decomposition& dec);
std::string snf_json(const SnfSystem& snf, const MonotoneSystem& original);
std::string clean_json(const MonotoneSystem& original, const CleanedSystem& cleaned);
std::string bounds_json(const MonotoneSystem& cleaned, const QminLowerBound& qmin,
                        const QmaxUpperBound& qmax);
std::string vector_json(const MonotoneSystem& sys, const RVector& values, std::uint64_t steps);
/// One JSON-lines record of an SCC iteration.
std::string trace_json(std::size_t scc, const TraceRecord& record);

}  // namespace rdnm
