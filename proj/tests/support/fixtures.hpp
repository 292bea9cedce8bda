#pragma once

namespace testsupport {

// Movie record twice: an object cast on the left, an array cast plus one
// renamed key on the right. Distance 5; ordered upper bound 8.
inline constexpr const char* kMovieA =
    "{\"title\":\"Star Wars - A New Hope\",\"running time\":125,"
    "\"cast\":{\"Han\":\"Ford\",\"Leia\":\"Fisher\"}}";
inline constexpr const char* kMovieB =
    "{\"cast\":[\"Ford\",\"Fisher\"],\"running time\":125,"
    "\"name\":\"Star Wars - A New Hope\"}";

// Same four members regrouped under different parents. The cheap mapping
// moves members across parents, which document-preserving forbids.
inline constexpr const char* kRegroupA =
    "{\"v1\":{\"x1key\":\"A\",\"x2key\":\"B\"},\"v2\":{\"x3key\":\"C\",\"x4key\":\"D\"}}";
inline constexpr const char* kRegroupB =
    "{\"w1\":{\"x1key\":\"A\",\"x3key\":\"C\"},\"w2\":{\"x2key\":\"B\",\"x4key\":\"D\"}}";

// One run of eight versus the same run split in two. Every aligned array
// pair differs a lot in shape, so the aggregate size bound is large.
inline constexpr const char* kSplitArrayA = "[[1,2,3,4,5,6,7,8]]";
inline constexpr const char* kSplitArrayB = "[[1,2,3,4],[5,6,7,8]]";

} // namespace testsupport
