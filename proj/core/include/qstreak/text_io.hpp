#pragma once

#include <map>
#include <string>

#include "qstreak/ensemble.hpp"
#include "qstreak/retrieval.hpp"

namespace qstreak {

// Plain-text artifacts with a '#'-prefixed header of key = value lines that
// records the full configuration. All numbers use scientific notation with
// 14 significant digits and '.' as the decimal separator.

void write_moment_trace(const std::string& path, const MomentTrace& trace,
                        const std::map<std::string, std::string>& header);
MomentTrace read_moment_trace(const std::string& path);

void write_spectrogram(const std::string& path, const StreakSpectrogram& spec,
                       const std::map<std::string, std::string>& header);
StreakSpectrogram read_spectrogram(const std::string& path);

void write_report(const std::string& path, const RetrievalReport& report,
                  const std::map<std::string, std::string>& header);
std::map<std::string, std::string> read_report(const std::string& path);

}  // namespace qstreak
