#pragma once

namespace cvb {

struct PixelPoint {
  double u;
  double v;
};

/// World position in millimetres.
struct WorldPoint {
  double X;
  double Y;
};

/// A key point seen at pixel (u, v) whose world position (X, Y) is known.
struct Correspondence {
  double u;
  double v;
  double X;
  double Y;
};

}  // namespace cvb
