#pragma once

#include "hubness/embedding.hpp"

#include <filesystem>
#include <optional>
#include <vector>

namespace hubness {

/// On-disk layouts for embedding matrices.
///
/// binary: "EMB1", u32 m, u32 D (little-endian), then m*D little-endian float32, row-major.
/// csv:    no header, D comma-separated decimal values per line.
///
/// Labels always live in a sidecar text file with one base-10 integer per line.
enum class FileFormat { binary, csv };

/// Guesses the format of an existing file from its first bytes ("EMB1" means binary).
FileFormat detect_format(const std::filesystem::path& path);

/// Conventional sidecar location for the labels of `embeddings`: `<path>.labels`.
std::filesystem::path labels_path_for(const std::filesystem::path& embeddings);

/// Reads an embedding matrix and, if `labels` is given, its label sidecar.
/// Throws FormatError (carrying the offending row) or IoError.
EmbeddingSet load_embeddings(const std::filesystem::path& path, FileFormat format,
                             const std::optional<std::filesystem::path>& labels = std::nullopt);

/// Writes `set` to `path`. Values are narrowed to float32 in the binary format, so a
/// binary round trip is exact for any set whose entries are float-representable (in
/// particular anything previously loaded from a binary file). CSV is written with
/// enough digits to round-trip doubles. Labels, when present, are written to
/// labels_path_for(path).
void save_embeddings(const EmbeddingSet& set, const std::filesystem::path& path, FileFormat format);

std::vector<int> read_labels(const std::filesystem::path& path);
void write_labels(const std::vector<int>& labels, const std::filesystem::path& path);

} // namespace hubness
