#include "heraldshape/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace heraldshape::io {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::string cleaned = line;
  for (char& c : cleaned)
    if (c == ',' || c == '\t') c = ' ';
  std::istringstream in(cleaned);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

bool next_data_line(std::istream& in, std::vector<std::string>& tokens) {
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    tokens = tokenize(line);
    if (!tokens.empty()) return true;
  }
  return false;
}

double parse_double(const std::string& tok, const char* what) {
  try {
    size_t used = 0;
    double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("malformed ") + what + ": '" + tok + "'");
  }
}

TimeGrid parse_grid_header(const std::vector<std::string>& tokens, const char* tag) {
  if (tokens.size() != 4 || tokens[0] != tag)
    throw std::invalid_argument(std::string("expected '") + tag + ",t_start,dt,n' header");
  const double t_start = parse_double(tokens[1], "t_start");
  const double dt = parse_double(tokens[2], "dt");
  const double n = parse_double(tokens[3], "n");
  if (n < 8 || n != std::floor(n))
    throw std::invalid_argument("grid header: n must be an integer >= 8");
  return TimeGrid(t_start, dt, static_cast<Index>(n));
}

VectorXcd read_samples(std::istream& in, Index count, const char* what) {
  VectorXcd values(count);
  std::vector<std::string> tokens;
  for (Index k = 0; k < count; ++k) {
    if (!next_data_line(in, tokens) || tokens.size() != 2)
      throw std::invalid_argument(std::string(what) + ": expected 're,im' sample line " +
                                  std::to_string(k));
    values(k) = Complex(parse_double(tokens[0], "re"), parse_double(tokens[1], "im"));
  }
  return values;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  return out;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

Field1D load_field1d(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  std::vector<std::string> tokens;
  if (!next_data_line(in, tokens))
    throw std::invalid_argument(path.string() + ": empty file");
  TimeGrid grid = parse_grid_header(tokens, "grid");
  return Field1D(grid, read_samples(in, grid.n, path.string().c_str()));
}

Field2D load_field2d(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  std::vector<std::string> tokens;
  if (!next_data_line(in, tokens))
    throw std::invalid_argument(path.string() + ": empty file");
  TimeGrid gs = parse_grid_header(tokens, "signal");
  if (!next_data_line(in, tokens))
    throw std::invalid_argument(path.string() + ": missing idler header");
  TimeGrid gi = parse_grid_header(tokens, "idler");
  VectorXcd flat = read_samples(in, gs.n * gi.n, path.string().c_str());
  MatrixXcd values(gs.n, gi.n);
  for (Index j = 0; j < gs.n; ++j)
    for (Index k = 0; k < gi.n; ++k) values(j, k) = flat(j * gi.n + k);
  return Field2D(gs, gi, std::move(values));
}

void save_field1d(const Field1D& f, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << "grid," << format_double(f.grid.t_start) << ',' << format_double(f.grid.dt)
      << ',' << f.grid.n << '\n';
  for (Index k = 0; k < f.grid.n; ++k)
    out << format_double(f.values(k).real()) << ',' << format_double(f.values(k).imag())
        << '\n';
}

void save_field2d(const Field2D& f, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << "signal," << format_double(f.grid_s.t_start) << ','
      << format_double(f.grid_s.dt) << ',' << f.grid_s.n << '\n';
  out << "idler," << format_double(f.grid_i.t_start) << ','
      << format_double(f.grid_i.dt) << ',' << f.grid_i.n << '\n';
  for (Index j = 0; j < f.grid_s.n; ++j)
    for (Index k = 0; k < f.grid_i.n; ++k)
      out << format_double(f.values(j, k).real()) << ','
          << format_double(f.values(j, k).imag()) << '\n';
}

}  // namespace heraldshape::io
