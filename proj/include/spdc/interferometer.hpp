#pragma once

#include <functional>
#include <vector>

#include "spdc/grid.hpp"
#include "spdc/model.hpp"
#include "spdc/schmidt.hpp"

namespace spdc {

/// Linear map on the signal photon's transverse plane, row-major.
struct Matrix2 {
    double xx = 1.0, xy = 0.0, yx = 0.0, yy = 1.0;

    Vec2 operator()(const Vec2& r) const { return {xx * r[0] + xy * r[1], yx * r[0] + yy * r[1]}; }
    Matrix2 inverse() const;
    static Matrix2 identity() { return {}; }
};

Matrix2 operator*(const Matrix2& lhs, const Matrix2& rhs);

/// Mirror: a(x, y) -> a(x, -y).
Matrix2 mirror_map();
/// Dove prism rotated by theta from its inversion axis:
/// a(x, y) -> a(x cos2t - y sin2t, -x sin2t - y cos2t).
Matrix2 dove_prism_map(double theta);

/// One contribution weight * psi(pullback(r_s); r_i) to a beam's amplitude.
struct AmplitudeTerm {
    complex weight{1.0, 0.0};
    Matrix2 pullback;
};

/// Signal-photon amplitude in one optical path, as a superposition of the
/// source biphoton evaluated at mapped signal coordinates.
using Beam = std::vector<AmplitudeTerm>;

/// Pass a beam through an element whose creation-operator map sends
/// a(r) to a(element(r)).
Beam propagate(const Beam& beam, const Matrix2& element);

struct BeamSplitterOutputs {
    Beam transmitted;
    Beam reflected;
};

/// a_in(x, y) -> a_t(x, y) + i a_r(x, -y), unnormalized.
BeamSplitterOutputs beam_splitter(const Beam& in);

Beam superpose(Beam lhs, const Beam& rhs);

/// Signal path: PBS reflection, BS1, arm 1 [Dove theta1, mirror],
/// arm 2 [Dove theta2, mirror], BS2. Port a collects arm 2 transmitted and
/// arm 1 reflected at BS2; port b the other pair. At (pi/2, 0) port a is the
/// even-parity projector and port b the odd one.
struct InterferometerPorts {
    Beam a;
    Beam b;
};

InterferometerPorts compose_interferometer(double theta1, double theta2);

using Biphoton = std::function<complex(const Vec2& xs, const Vec2& xi)>;

/// Coincidence density 1/4 |sum w psi(L r_s; r_i)|^2; the 1/4 accounts for
/// the two unnormalized beam-splitter passes.
double port_intensity(const Beam& port, const Biphoton& psi, const Vec2& xs, const Vec2& xi);

/// Closed forms of the two port densities at Dove angles (pi/2, 0):
/// 1/4 |psi(x, y) + psi(-x, -y)|^2 and 1/4 |psi(x, -y) - psi(-x, y)|^2.
double parity_port_even(const Biphoton& psi, const Vec2& xs, const Vec2& xi);
double parity_port_odd(const Biphoton& psi, const Vec2& xs, const Vec2& xi);

/// Analytic biphoton of a configuration at distance z.
Biphoton analytic_biphoton(const OpticalConfig& config, double z);

/// Grid backend result. Maps are the port densities on the (x_s, x_i) plane
/// at the y cells nearest 0, row-major [x_s][x_i].
struct InterferometerRun {
    PortProbabilities probabilities;
    GridSpec grid;
    std::vector<double> map_a;
    std::vector<double> map_b;
};

/// Composes the element maps and integrates both ports over the product of
/// the per-axis coordinate fields. Dove angles must be multiples of pi/2 so
/// every mapped coordinate is a grid point.
InterferometerRun simulate_interferometer(const GridField& x_field, const GridField& y_field, double theta1,
                                          double theta2);

/// Largest deviation between the composed port densities at (pi/2, 0) and
/// the closed parity forms over `samples` pseudo-random grid points, relative
/// to (sum of term magnitudes)^2 / 4 at each point.
double parity_form_deviation(const GridField& x_field, const GridField& y_field, int samples, unsigned seed);

}  // namespace spdc
