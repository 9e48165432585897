#ifndef FST_TYPES_HPP
#define FST_TYPES_HPP

namespace fst {

/// The two charges on the line. Particle A is the right one (a(t) > b(t)).
enum class Particle { A, B };

/// Which branch of the light cone a query refers to.
enum class ConeSign { advanced, retarded };

/// Position / velocity / acceleration triple at one instant.
struct Kinematics {
    double pos = 0.0;
    double vel = 0.0;
    double acc = 0.0;
};

/// Position / velocity pair used by dense trajectory evaluation.
struct PhaseSample {
    double pos = 0.0;
    double vel = 0.0;
};

inline const char* particle_name(Particle p) { return p == Particle::A ? "a" : "b"; }

}  // namespace fst

#endif
