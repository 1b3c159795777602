// Text formats.
//   Design:   "D v k lambda", then v rows of v chars from {0,1}.
//   Orbit:    "OM v k lambda p f t", omega line, Omega line, t rows of t ints.
//   3-design: "T3 n k lambda b", then b rows of n chars.
// Records in a multi-record file are separated by one blank line.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "orbitforge/design.hpp"
#include "orbitforge/hadamard.hpp"
#include "orbitforge/orbit.hpp"

namespace orbitforge {

void write_design(std::ostream& os, const IncidenceMatrix& m);
void write_designs(const std::string& path, const std::vector<IncidenceMatrix>& ms);
std::vector<IncidenceMatrix> read_designs(const std::string& path);
std::vector<IncidenceMatrix> read_designs_stream(std::istream& is);

void write_orbit_matrix(std::ostream& os, const OrbitMatrix& om);
void write_orbit_matrices(const std::string& path, const std::vector<OrbitMatrix>& oms);
std::vector<OrbitMatrix> read_orbit_matrices(const std::string& path);
std::vector<OrbitMatrix> read_orbit_matrices_stream(std::istream& is);

void write_three_design(std::ostream& os, const ThreeDesign& d);
void write_three_designs(const std::string& path, const std::vector<ThreeDesign>& ds);
std::vector<ThreeDesign> read_three_designs(const std::string& path);

}  // namespace orbitforge
