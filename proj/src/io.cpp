#include "orbitforge/io.hpp"

#include <fstream>
#include <sstream>

namespace orbitforge {

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open " + path);
  return is;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot write " + path);
  return os;
}

// Reads the next non-blank line; false at EOF.
bool next_line(std::istream& is, std::string& line) {
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) return true;
  }
  return false;
}

bool expect_line(std::istream& is, std::string& line) {
  if (!std::getline(is, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

}  // namespace

void write_design(std::ostream& os, const IncidenceMatrix& m) {
  const DesignParams& p = m.params();
  os << "D " << p.v << ' ' << p.k << ' ' << p.lambda << '\n';
  for (int i = 0; i < p.v; ++i) {
    std::string row(p.v, '0');
    for (int j = 0; j < p.v; ++j)
      if (m.at(i, j)) row[j] = '1';
    os << row << '\n';
  }
}

void write_designs(const std::string& path, const std::vector<IncidenceMatrix>& ms) {
  std::ofstream os = open_out(path);
  for (size_t i = 0; i < ms.size(); ++i) {
    if (i) os << '\n';
    write_design(os, ms[i]);
  }
}

std::vector<IncidenceMatrix> read_designs_stream(std::istream& is) {
  std::vector<IncidenceMatrix> out;
  std::string line;
  while (next_line(is, line)) {
    std::istringstream head(line);
    std::string tag;
    long long v, k, lambda;
    if (!(head >> tag >> v >> k >> lambda) || tag != "D")
      throw FormatError("bad design header: " + line);
    DesignParams p = validate_params(v, k, lambda);
    BitMatrix bits(p.v, p.v);
    for (int i = 0; i < p.v; ++i) {
      if (!expect_line(is, line) || static_cast<int>(line.size()) != p.v)
        throw FormatError("bad design row");
      for (int j = 0; j < p.v; ++j) {
        if (line[j] == '1')
          bits.set(i, j, true);
        else if (line[j] != '0')
          throw FormatError("design rows must be 0/1");
      }
    }
    out.emplace_back(p, std::move(bits));
  }
  return out;
}

std::vector<IncidenceMatrix> read_designs(const std::string& path) {
  std::ifstream is = open_in(path);
  return read_designs_stream(is);
}

void write_orbit_matrix(std::ostream& os, const OrbitMatrix& om) {
  const OrbitDistribution& d = om.dist;
  os << "OM " << d.params.v << ' ' << d.params.k << ' ' << d.params.lambda << ' ' << d.p << ' '
     << d.f << ' ' << d.t << '\n';
  for (int r = 0; r < d.t; ++r) os << (r ? " " : "") << d.omega[r];
  os << '\n';
  for (int i = 0; i < d.t; ++i) os << (i ? " " : "") << d.Omega[i];
  os << '\n';
  for (int i = 0; i < d.t; ++i) {
    for (int r = 0; r < d.t; ++r) os << (r ? " " : "") << om.at(i, r);
    os << '\n';
  }
}

void write_orbit_matrices(const std::string& path, const std::vector<OrbitMatrix>& oms) {
  std::ofstream os = open_out(path);
  for (size_t i = 0; i < oms.size(); ++i) {
    if (i) os << '\n';
    write_orbit_matrix(os, oms[i]);
  }
}

std::vector<OrbitMatrix> read_orbit_matrices_stream(std::istream& is) {
  std::vector<OrbitMatrix> out;
  std::string line;
  while (next_line(is, line)) {
    std::istringstream head(line);
    std::string tag;
    long long v, k, lambda;
    int p, f, t;
    if (!(head >> tag >> v >> k >> lambda >> p >> f >> t) || tag != "OM")
      throw FormatError("bad orbit matrix header: " + line);
    OrbitMatrix om;
    om.dist.params = validate_params(v, k, lambda);
    om.dist.p = p;
    om.dist.f = f;
    om.dist.t = t;
    auto read_vec = [&](std::vector<int>& dst) {
      if (!expect_line(is, line)) throw FormatError("missing orbit length line");
      std::istringstream ls(line);
      dst.assign(t, 0);
      for (int r = 0; r < t; ++r)
        if (!(ls >> dst[r])) throw FormatError("short orbit length line");
    };
    read_vec(om.dist.omega);
    read_vec(om.dist.Omega);
    om.gamma.assign(static_cast<size_t>(t) * t, 0);
    for (int i = 0; i < t; ++i) {
      if (!expect_line(is, line)) throw FormatError("missing orbit matrix row");
      std::istringstream ls(line);
      for (int r = 0; r < t; ++r)
        if (!(ls >> om.gamma[static_cast<size_t>(i) * t + r]))
          throw FormatError("short orbit matrix row");
    }
    out.push_back(std::move(om));
  }
  return out;
}

std::vector<OrbitMatrix> read_orbit_matrices(const std::string& path) {
  std::ifstream is = open_in(path);
  return read_orbit_matrices_stream(is);
}

void write_three_design(std::ostream& os, const ThreeDesign& d) {
  os << "T3 " << d.point_count() << ' ' << d.block_size() << ' ' << d.lambda3() << ' '
     << d.block_count() << '\n';
  for (int i = 0; i < d.block_count(); ++i) {
    std::string row(d.point_count(), '0');
    for (int j = 0; j < d.point_count(); ++j)
      if (d.blocks().get(i, j)) row[j] = '1';
    os << row << '\n';
  }
}

void write_three_designs(const std::string& path, const std::vector<ThreeDesign>& ds) {
  std::ofstream os = open_out(path);
  for (size_t i = 0; i < ds.size(); ++i) {
    if (i) os << '\n';
    write_three_design(os, ds[i]);
  }
}

std::vector<ThreeDesign> read_three_designs(const std::string& path) {
  std::ifstream is = open_in(path);
  std::vector<ThreeDesign> out;
  std::string line;
  while (next_line(is, line)) {
    std::istringstream head(line);
    std::string tag;
    int n, k, lambda, b;
    if (!(head >> tag >> n >> k >> lambda >> b) || tag != "T3")
      throw FormatError("bad 3-design header: " + line);
    if (n % 4 != 0 || k != n / 2 || lambda != n / 4 - 1 || b != 2 * n - 2)
      throw FormatError("3-design header is not Hadamard-shaped");
    int t = n / 4;
    BitMatrix bits(b, n);
    for (int i = 0; i < b; ++i) {
      if (!expect_line(is, line) || static_cast<int>(line.size()) != n)
        throw FormatError("bad 3-design row");
      for (int j = 0; j < n; ++j)
        if (line[j] == '1') bits.set(i, j, true);
    }
    out.emplace_back(t, std::move(bits));
  }
  return out;
}

}  // namespace orbitforge
