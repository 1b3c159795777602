// Extension of 2-(4t-1, 2t-1, t-1) designs to Hadamard 3-(4t, 2t, t-1)
// designs, derivation back, and isomorphism classification of extensions.
#pragma once

#include <functional>
#include <unordered_map>
#include <vector>

#include "orbitforge/canonical.hpp"
#include "orbitforge/design.hpp"

namespace orbitforge {

class ThreeDesign {
 public:
  // blocks: (8t-2) x 4t incidence, t >= 2.
  ThreeDesign(int t, BitMatrix blocks);

  int t() const { return t_; }
  int point_count() const { return 4 * t_; }
  int block_count() const { return 8 * t_ - 2; }
  int block_size() const { return 2 * t_; }
  int lambda3() const { return t_ - 1; }
  // The added point carries the last label.
  int infinity() const { return 4 * t_ - 1; }

  const BitMatrix& blocks() const { return blocks_; }

  friend bool operator==(const ThreeDesign& a, const ThreeDesign& b) {
    return a.t_ == b.t_ && a.blocks_ == b.blocks_;
  }

 private:
  int t_;
  BitMatrix blocks_;
};

// Throws NotHadamardParameters unless params = (4t-1, 2t-1, t-1), t >= 2.
// Rows 0..v-1 are the original blocks with the new point added, rows v..2v-1
// the complements of the original blocks.
ThreeDesign extend(const IncidenceMatrix& m);

// Blocks through `point` with the point removed; throws UnknownPoint.
IncidenceMatrix derive(const ThreeDesign& d, int point);

// Exhaustive check: every 3-subset of points lies in exactly t-1 blocks, and
// blocks come in complementary pairs.
bool is_3design(const ThreeDesign& d);

CanonicalRecord canonical_form_3design(const ThreeDesign& d);

struct ExtensionClass {
  CanonicalRecord record;
  int derived_classes = 0;            // Aut-orbits on the 4t points
  unsigned long long inputs = 0;      // input designs that landed in this class
};

// Streaming classifier for extensions of Hadamard 2-designs.
class ExtensionClassifier {
 public:
  // Returns true when the extension's isomorphism class is new.
  bool add(const IncidenceMatrix& design);
  std::vector<ExtensionClass> finish();

 private:
  struct KeyHash {
    size_t operator()(const std::vector<uint8_t>& k) const;
  };
  std::vector<ExtensionClass> classes_;
  std::unordered_map<std::vector<uint8_t>, size_t, KeyHash> index_;
};

std::vector<ExtensionClass> classify_extensions(const std::vector<IncidenceMatrix>& designs);

ThreeDesign three_design_from_key(int t, const std::vector<uint8_t>& key);

}  // namespace orbitforge
