#include "qstreak/text_io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "qstreak/errors.hpp"

namespace qstreak {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.14e", v);
  return buf;
}

void write_header(std::ofstream& out, const std::string& kind,
                  const std::map<std::string, std::string>& header) {
  out << "# qstreak " << kind << "\n";
  for (const auto& [key, value] : header) {
    out << "# " << key << " = " << value << "\n";
  }
}

struct ParsedFile {
  std::map<std::string, std::string> header;
  std::vector<std::vector<double>> rows;
};

ParsedFile parse_columns(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  ParsedFile file;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.front() == '#') {
      const size_t eq = line.find('=');
      if (eq != std::string::npos) {
        size_t key_start = 1;
        while (key_start < line.size() && std::isspace(static_cast<unsigned char>(line[key_start])))
          ++key_start;
        std::string key = line.substr(key_start, eq - key_start);
        while (!key.empty() && std::isspace(static_cast<unsigned char>(key.back())))
          key.pop_back();
        size_t val_start = eq + 1;
        while (val_start < line.size() && std::isspace(static_cast<unsigned char>(line[val_start])))
          ++val_start;
        if (!key.empty() && key.find(' ') == std::string::npos) {
          file.header[key] = line.substr(val_start);
        }
      }
      continue;
    }
    std::vector<double> row;
    const char* s = line.c_str();
    char* end = nullptr;
    for (;;) {
      const double v = std::strtod(s, &end);
      if (end == s) break;
      row.push_back(v);
      s = end;
    }
    if (!row.empty()) file.rows.push_back(std::move(row));
  }
  return file;
}

std::vector<double> parse_vector(const std::string& text) {
  std::vector<double> v;
  const char* s = text.c_str();
  char* end = nullptr;
  for (;;) {
    const double x = std::strtod(s, &end);
    if (end == s) break;
    v.push_back(x);
    s = end;
  }
  return v;
}

}  // namespace

void write_moment_trace(const std::string& path, const MomentTrace& trace,
                        const std::map<std::string, std::string>& header) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open " + path + " for writing");
  write_header(out, "moment-trace", header);
  for (const auto& [key, value] : trace.meta) {
    if (!header.count(key)) out << "# " << key << " = " << value << "\n";
  }
  out << "# trace.p0 = " << fmt(trace.p0) << "\n";
  out << "# columns: tau_au mean_shift_au variance_au2\n";
  for (size_t i = 0; i < trace.tau.size(); ++i) {
    out << fmt(trace.tau[i]) << " " << fmt(trace.mean_shift[i]) << " "
        << fmt(trace.variance[i]) << "\n";
  }
}

MomentTrace read_moment_trace(const std::string& path) {
  const ParsedFile file = parse_columns(path);
  MomentTrace trace;
  trace.meta = file.header;
  for (const std::vector<double>& row : file.rows) {
    if (row.size() != 3) {
      throw ValidationError(path + ": moment trace rows need 3 columns");
    }
    trace.tau.push_back(row[0]);
    trace.mean_shift.push_back(row[1]);
    trace.variance.push_back(row[2]);
  }
  if (trace.tau.empty()) throw ValidationError(path + ": empty moment trace");
  const auto it = file.header.find("trace.p0");
  if (it != file.header.end()) trace.p0 = std::strtod(it->second.c_str(), nullptr);
  return trace;
}

void write_spectrogram(const std::string& path, const StreakSpectrogram& spec,
                       const std::map<std::string, std::string>& header) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open " + path + " for writing");
  write_header(out, "spectrogram", header);
  for (const auto& [key, value] : spec.meta) {
    if (!header.count(key)) out << "# " << key << " = " << value << "\n";
  }
  out << "# trace.p0 = " << fmt(spec.p0) << "\n";
  out << "# p_grid =";
  for (double p : spec.p) out << " " << fmt(p);
  out << "\n# columns: tau_au P(p_1..p_" << spec.p.size() << ")\n";
  for (size_t j = 0; j < spec.tau.size(); ++j) {
    out << fmt(spec.tau[j]);
    const double* row = spec.values.data() + j * spec.p.size();
    for (size_t i = 0; i < spec.p.size(); ++i) out << " " << fmt(row[i]);
    out << "\n";
  }
}

StreakSpectrogram read_spectrogram(const std::string& path) {
  const ParsedFile file = parse_columns(path);
  StreakSpectrogram spec;
  spec.meta = file.header;
  const auto pg = file.header.find("p_grid");
  if (pg == file.header.end()) {
    throw ValidationError(path + ": spectrogram lacks a p_grid header");
  }
  spec.p = parse_vector(pg->second);
  spec.meta.erase("p_grid");
  if (spec.p.empty()) throw ValidationError(path + ": empty p_grid");
  for (const std::vector<double>& row : file.rows) {
    if (row.size() != spec.p.size() + 1) {
      throw ValidationError(path + ": spectrogram row width does not match p_grid");
    }
    spec.tau.push_back(row[0]);
    spec.values.insert(spec.values.end(), row.begin() + 1, row.end());
  }
  if (spec.tau.empty()) throw ValidationError(path + ": empty spectrogram");
  const auto it = file.header.find("trace.p0");
  if (it != file.header.end()) spec.p0 = std::strtod(it->second.c_str(), nullptr);
  return spec;
}

void write_report(const std::string& path, const RetrievalReport& report,
                  const std::map<std::string, std::string>& header) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open " + path + " for writing");
  write_header(out, "retrieval-report", header);
  out << "# mean fit used " << report.mean_fit.n_used << " delays, variance fit "
      << report.variance_fit.n_used << "\n";
  if (report.variance_fit.sigma0_nonphysical) {
    out << "# warning: fitted sigma0_sq is negative\n";
  }
  out << "[retrieval]\n";
  out << "e_coh = " << fmt(report.e_coh) << "\n";
  out << "e_sq = " << fmt(report.e_sq) << "\n";
  out << "phi_streak = " << fmt(report.phi_streak) << "\n";
  out << "theta_streak = " << fmt(report.theta_streak) << "\n";
  out << "delta = " << fmt(report.delta) << "\n";
  out << "phi = " << fmt(report.phi) << "\n";
  out << "theta = " << fmt(report.theta) << "\n";
  out << "sigma0_sq = " << fmt(report.sigma0_sq) << "\n";
  out << "residual_mean = " << fmt(report.residual_mean) << "\n";
  out << "residual_var = " << fmt(report.residual_var) << "\n";
}

std::map<std::string, std::string> read_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  bool in_block = false;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    if (line == "[retrieval]") {
      in_block = true;
      continue;
    }
    if (!in_block) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = line.substr(0, eq);
    while (!key.empty() && key.back() == ' ') key.pop_back();
    size_t vs = eq + 1;
    while (vs < line.size() && line[vs] == ' ') ++vs;
    kv[key] = line.substr(vs);
  }
  if (kv.empty()) throw ValidationError(path + ": no [retrieval] block found");
  return kv;
}

}  // namespace qstreak
