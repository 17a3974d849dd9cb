#include "blochhom/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "blochhom/pipelines.hpp"

namespace blochhom {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

double to_double(const std::string& s, int line) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(line, "expected a number, got '" + s + "'");
  }
}

int to_int(const std::string& s, int line) {
  try {
    size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(line, "expected an integer, got '" + s + "'");
  }
}

std::vector<int> to_int_list(const std::string& s, int line) {
  std::vector<int> out;
  for (const auto& tok : split_ws(s)) out.push_back(to_int(tok, line));
  return out;
}

std::vector<double> to_double_list(const std::string& s, int line) {
  std::vector<double> out;
  for (const auto& tok : split_ws(s)) out.push_back(to_double(tok, line));
  return out;
}

CoefficientProfile to_profile(const std::string& s, int line) {
  const auto toks = split_ws(s);
  if (toks.empty()) throw ConfigError(line, "empty coefficient spec");
  try {
    if (toks[0] == "constant" && toks.size() == 2)
      return CoefficientProfile::constant(to_double(toks[1], line));
    if (toks[0] == "sine" && toks.size() == 3)
      return CoefficientProfile::sine(to_double(toks[1], line), to_double(toks[2], line));
    if (toks[0] == "piecewise" && toks.size() >= 2) {
      std::vector<double> breaks, values;
      for (size_t i = 1; i < toks.size(); ++i) {
        const auto colon = toks[i].find(':');
        if (colon == std::string::npos)
          throw ConfigError(line, "piecewise entries are break:value pairs");
        breaks.push_back(to_double(toks[i].substr(0, colon), line));
        values.push_back(to_double(toks[i].substr(colon + 1), line));
      }
      return CoefficientProfile::piecewise_constant(std::move(breaks), std::move(values));
    }
    if (toks[0] == "sampled" && toks.size() >= 3) {
      std::vector<double> samples;
      for (size_t i = 1; i < toks.size(); ++i) samples.push_back(to_double(toks[i], line));
      return CoefficientProfile::sampled(std::move(samples));
    }
  } catch (const Error& e) {
    throw ConfigError(line, e.what());
  }
  throw ConfigError(line, "unknown coefficient spec '" + s +
                              "' (use constant/sine/piecewise/sampled)");
}

}  // namespace

std::vector<double> RunConfig::k_grid() const {
  if (k_list_set) return k_list;
  return SearchSpace::uniform_grid(k_step);
}

std::vector<int> RunConfig::match_indices() const {
  std::vector<int> out;
  for (int p = match_p_min; p <= match_p_max; ++p)
    if (std::find(match_exclude.begin(), match_exclude.end(), p) == match_exclude.end())
      out.push_back(p);
  return out;
}

void RunConfig::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(0, what);
  };
  require(alpha > 0.0, "alpha must be positive");
  require(cells >= 1, "cells must be positive");
  require(n_phys >= 1 && n_bloch >= 1, "element counts must be positive");
  require(n_phys % cells == 0,
          "n_phys must be divisible by cells (element/cell alignment)");
  require(r >= 0, "r must be nonnegative");
  require(n_bands >= 1, "n_bands must be positive");
  require(workers >= 1, "workers must be positive");
  require(phys_p_min >= 1 && phys_p_max >= phys_p_min, "bad physical p range");
  require(match_p_min >= 1 && match_p_max >= match_p_min, "bad match p range");
  require(conv_per_cell >= 1, "per_cell must be positive");
  for (double k : k_grid())
    require(k >= -0.5 && k < 0.5, "k grid values must lie in [-1/2, 1/2)");
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find_first_of("#;");
    std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "expected key = value");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    const std::string qual = section.empty() ? key : section + "." + key;

    if (qual == "problem.alpha") cfg.alpha = to_double(value, line);
    else if (qual == "problem.cells") cfg.cells = to_int(value, line);
    else if (qual == "problem.a") cfg.a = to_profile(value, line);
    else if (qual == "problem.rho") cfg.rho = to_profile(value, line);
    else if (qual == "problem.n_phys") cfg.n_phys = to_int(value, line);
    else if (qual == "problem.n_bloch") cfg.n_bloch = to_int(value, line);
    else if (qual == "problem.bc") {
      if (value == "dirichlet") cfg.bc = BoundaryTreatment::Kind::dirichlet;
      else if (value == "neumann") cfg.bc = BoundaryTreatment::Kind::neumann;
      else throw ConfigError(line, "bc must be dirichlet or neumann");
    }
    else if (qual == "search.k_step") cfg.k_step = to_double(value, line);
    else if (qual == "search.k_list") {
      cfg.k_list = to_double_list(value, line);
      cfg.k_list_set = true;
    }
    else if (qual == "search.r") cfg.r = to_int(value, line);
    else if (qual == "search.n_bands") cfg.n_bands = to_int(value, line);
    else if (qual == "physical.p_min") cfg.phys_p_min = to_int(value, line);
    else if (qual == "physical.p_max") cfg.phys_p_max = to_int(value, line);
    else if (qual == "physical.write_modes") cfg.phys_write_modes = to_int_list(value, line);
    else if (qual == "match.p_min") cfg.match_p_min = to_int(value, line);
    else if (qual == "match.p_max") cfg.match_p_max = to_int(value, line);
    else if (qual == "match.exclude") cfg.match_exclude = to_int_list(value, line);
    else if (qual == "match.write_modes") cfg.match_write_modes = to_int_list(value, line);
    else if (qual == "model.k") cfg.model_k = to_double(value, line);
    else if (qual == "model.n") cfg.model_n = to_int(value, line);
    else if (qual == "converge.k") cfg.conv_k = to_double(value, line);
    else if (qual == "converge.l") cfg.conv_l = to_double(value, line);
    else if (qual == "converge.n") cfg.conv_n = to_int(value, line);
    else if (qual == "converge.h_list") cfg.conv_h_list = to_int_list(value, line);
    else if (qual == "converge.per_cell") cfg.conv_per_cell = to_int(value, line);
    else if (qual == "output.dir") cfg.out_dir = value;
    else if (qual == "output.workers") cfg.workers = to_int(value, line);
    else throw ConfigError(line, "unknown key '" + qual + "'");
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

std::string RunConfig::serialize() const {
  std::ostringstream out;
  out << "[problem]\n";
  out << "alpha = " << fmt(alpha) << "\n";
  out << "cells = " << cells << "\n";
  out << "a = " << a.spec() << "\n";
  out << "rho = " << rho.spec() << "\n";
  out << "n_phys = " << n_phys << "\n";
  out << "n_bloch = " << n_bloch << "\n";
  out << "bc = " << (bc == BoundaryTreatment::Kind::dirichlet ? "dirichlet" : "neumann") << "\n";
  out << "\n[search]\n";
  if (!k_list_set) {
    out << "k_step = " << fmt(k_step) << "\n";
  } else {
    out << "k_list =";
    for (double k : k_list) out << " " << fmt(k);
    out << "\n";
  }
  out << "r = " << r << "\n";
  out << "n_bands = " << n_bands << "\n";
  out << "\n[physical]\n";
  out << "p_min = " << phys_p_min << "\n";
  out << "p_max = " << phys_p_max << "\n";
  out << "\n[match]\n";
  out << "p_min = " << match_p_min << "\n";
  out << "p_max = " << match_p_max << "\n";
  out << "exclude =";
  for (int p : match_exclude) out << " " << p;
  out << "\n";
  out << "\n[model]\n";
  out << "k = " << fmt(model_k) << "\n";
  out << "n = " << model_n << "\n";
  out << "\n[converge]\n";
  out << "k = " << fmt(conv_k) << "\n";
  out << "l = " << fmt(conv_l) << "\n";
  out << "n = " << conv_n << "\n";
  out << "h_list =";
  for (int h : conv_h_list) out << " " << h;
  out << "\n";
  out << "per_cell = " << conv_per_cell << "\n";
  out << "\n[output]\n";
  out << "dir = " << out_dir << "\n";
  out << "workers = " << workers << "\n";
  return out.str();
}

}  // namespace blochhom
