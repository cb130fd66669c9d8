#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "imgprops/raster.hpp"

namespace imgprops::balance {

/// Per-axis mirror symmetry terms in percent. Diagonal terms are NaN for
/// non-square images.
struct MirrorTerms {
  double vertical = 0.0;    ///< reflection about the vertical axis (left|right)
  double horizontal = 0.0;  ///< reflection about the horizontal axis (top|bottom)
  double diagonal = 0.0;
  double anti_diagonal = 0.0;
};

MirrorTerms mirror_terms(const Plane& gray);
/// Mean of the vertical and horizontal terms, plus both diagonals when square.
double mirror_symmetry(const Plane& gray);
double mirror_symmetry(const RasterImage& img);

/// Perceptual mass (255 - v) / 255: black weighs 1, white 0.
Plane perceptual_mass(const RasterImage& img);

/// The eight paired-region comparisons, each 100 |Ma - Mb| / (Ma + Mb).
enum Comparison : int {
  kLeftRight = 0,
  kTopBottom,
  kMainDiagonal,
  kAntiDiagonal,
  kOuterInnerColumns,
  kOuterInnerRows,
  kColumnPairs,
  kRowPairs,
};

std::array<double, 8> balance_comparisons(const Plane& mass);
/// Mean of the eight comparisons; 0 is balanced, 100 fully asymmetric.
double balance_score(const Plane& mass);
double balance_score(const RasterImage& img);

/// Distance of the centre of mass from the geometric centre as a percentage
/// of the half-diagonal. NaN when the total mass is 0.
double dcm(const Plane& mass);
double dcm(const RasterImage& img);

/// Otsu threshold on a 256-bin histogram: class 0 is v <= t. Lowest t wins
/// ties. Returns -1 when fewer than two gray levels are present.
int otsu_threshold(const std::array<std::uint64_t, 256>& histogram);

/// Relative row/column entropy of the black-pixel counts over a 10x10 grid
/// after Otsu binarization, times 100. NaN for one-class images.
double homogeneity(const RasterImage& img);
/// Same on an explicit black mask (1 = black).
double homogeneity_of_mask(const std::vector<std::uint8_t>& black, int width, int height);

}  // namespace imgprops::balance
