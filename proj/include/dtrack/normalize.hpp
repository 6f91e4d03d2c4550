// Reduction of a pattern to normal form by deleting trivial circles and pushing returning chords
// across their edge.
#pragma once

#include <random>
#include <string>
#include <vector>

#include "dtrack/complex.hpp"
#include "dtrack/pattern.hpp"

namespace dtrack {

struct Move {
    enum class Kind { DeleteCircle, ResolveReturningChord };
    Kind kind = Kind::DeleteCircle;
    int tri = -1;
    int chord = -1;  // index in the pattern before the move
    int edge = -1;
};

struct MoveLog {
    std::vector<Move> moves;
    std::vector<long> measure;  // w + d before the first move and after each one
};

struct NormalizeResult {
    Pattern pattern;
    MoveLog log;
    bool equivalence_asserted = true;  // false for one-sided input
    std::vector<Pattern> states;       // input and every intermediate pattern, when requested
};

// d counts chords plus trivial circles.
long arc_count(const Pattern& t);

// Circles go first (lowest triangle). Otherwise the returning chord with adjacent ends and the smallest
// (triangle, chord) index is removed with its two points, and the chords meeting those points in every
// other triangle on the edge are joined into one chord, or into a circle when they coincide.
NormalizeResult normalize(const Complex2& Y, const Pattern& t, bool keep_states = false);

// Random non-normal pattern equivalent to `base`: repeated inverse moves that push a finger of the
// pattern across an edge, then `circles` trivial circles. Stops before the weight exceeds max_weight.
Pattern random_finger_pattern(const Complex2& Y, const Pattern& base, int fingers, int circles, int max_weight,
                              std::mt19937_64& rng);

std::string move_kind_name(Move::Kind k);

}  // namespace dtrack
