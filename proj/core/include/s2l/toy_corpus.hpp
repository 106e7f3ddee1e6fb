#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "s2l/ink.hpp"
#include "s2l/layout.hpp"
#include "s2l/synth.hpp"

namespace s2l::toy {

// Small synthetic document pages and hand-drawing look-alike primitives for
// demos, smoke tests and benchmarks. Assets are kept well apart so sketch
// clustering has a clear answer.

inline constexpr Canvas kPage{1700.0, 2200.0};

Layout random_layout(Rng& rng);
std::vector<LayoutRecord> corpus(std::size_t count, std::uint64_t seed);

// Text: one wobbly horizontal stroke per line, line count from height/font size.
Primitive text_primitive(Rng& rng, double width, double height, double font_size);
// Image: rectangle outline plus both diagonals.
Primitive image_primitive(Rng& rng, double width, double height);

// Pool whose source attributes follow random_layout's asset distribution.
// The first `train` primitives are Train, the next `validation` Validation;
// text and image alternate.
std::vector<Primitive> primitive_pool(std::size_t train, std::size_t validation, std::uint64_t seed);

}  // namespace s2l::toy
