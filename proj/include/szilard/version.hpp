#ifndef SZILARD_VERSION_HPP
#define SZILARD_VERSION_HPP

namespace szilard {

inline constexpr const char* kVersion = "0.1.0";

// Bumped whenever a CLI CSV column is added, removed or reordered.
inline constexpr int kCsvSchemaVersion = 1;

}  // namespace szilard

#endif  // SZILARD_VERSION_HPP
