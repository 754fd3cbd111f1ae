#include "hubness/io.hpp"

#include "hubness/error.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>
#include <string_view>
#include <system_error>

namespace hubness {

namespace {

constexpr std::array<char, 4> kMagic = {'E', 'M', 'B', '1'};

std::uint32_t read_u32_le(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u32_le(std::string& out, std::uint32_t v) {
    for (int shift = 0; shift < 32; shift += 8) {
        out.push_back(static_cast<char>((v >> shift) & 0xFFu));
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw IoError("read failed for " + path.string());
    }
    return data;
}

void write_file(const std::filesystem::path& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    out.flush();
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

EmbeddingSet parse_binary(const std::string& data) {
    const auto* bytes = reinterpret_cast<const unsigned char*>(data.data());
    if (data.size() < 12 || !std::equal(kMagic.begin(), kMagic.end(), data.begin())) {
        throw FormatError("malformed header: expected magic EMB1 followed by m and D");
    }
    const std::uint64_t m = read_u32_le(bytes + 4);
    const std::uint64_t D = read_u32_le(bytes + 8);
    if (m == 0 || D == 0) {
        throw FormatError("malformed header: m and D must be positive");
    }
    const std::uint64_t row_bytes = D * 4;
    const std::uint64_t payload = data.size() - 12;
    if (payload < m * row_bytes) {
        throw FormatError("payload truncated", static_cast<std::size_t>(payload / row_bytes));
    }
    if (payload > m * row_bytes) {
        throw FormatError("trailing bytes after " + std::to_string(m) + " rows",
                          static_cast<std::size_t>(m));
    }
    std::vector<double> values(m * D);
    const unsigned char* p = bytes + 12;
    for (std::uint64_t i = 0; i < m * D; ++i, p += 4) {
        const float f = std::bit_cast<float>(read_u32_le(p));
        if (!std::isfinite(f)) {
            throw FormatError("non-finite value in column " + std::to_string(i % D + 1),
                              static_cast<std::size_t>(i / D));
        }
        values[i] = f;
    }
    return EmbeddingSet(m, D, std::move(values));
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

template <typename F>
void for_each_line(const std::string& data, F&& fn) {
    std::size_t start = 0;
    std::size_t line_no = 0;
    while (start < data.size()) {
        std::size_t end = data.find('\n', start);
        if (end == std::string::npos) end = data.size();
        fn(std::string_view(data).substr(start, end - start), line_no++);
        start = end + 1;
    }
}

EmbeddingSet parse_csv(const std::string& data) {
    std::vector<double> values;
    std::size_t D = 0;
    std::size_t m = 0;
    for_each_line(data, [&](std::string_view line, std::size_t row) {
        line = trim(line);
        if (line.empty()) {
            throw FormatError("empty line", row);
        }
        std::size_t fields = 0;
        std::size_t pos = 0;
        while (true) {
            std::size_t comma = line.find(',', pos);
            std::string_view field =
                trim(line.substr(pos, comma == std::string_view::npos ? line.npos : comma - pos));
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
            if (ec != std::errc() || ptr != field.data() + field.size()) {
                throw FormatError("cannot parse value '" + std::string(field) + "' in column " +
                                      std::to_string(fields + 1),
                                  row);
            }
            if (!std::isfinite(v)) {
                throw FormatError("non-finite value in column " + std::to_string(fields + 1), row);
            }
            values.push_back(v);
            ++fields;
            if (comma == std::string_view::npos) break;
            pos = comma + 1;
        }
        if (row == 0) {
            D = fields;
        } else if (fields != D) {
            throw FormatError("row length " + std::to_string(fields) + " does not match " +
                                  std::to_string(D),
                              row);
        }
        ++m;
    });
    if (m == 0) {
        throw FormatError("no rows");
    }
    return EmbeddingSet(m, D, std::move(values));
}

void append_double(std::string& out, double v) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    out.append(buf.data(), ptr);
}

} // namespace

FileFormat detect_format(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::array<char, 4> head{};
    in.read(head.data(), head.size());
    return (in.gcount() == 4 && head == kMagic) ? FileFormat::binary : FileFormat::csv;
}

std::filesystem::path labels_path_for(const std::filesystem::path& embeddings) {
    return std::filesystem::path(embeddings.string() + ".labels");
}

std::vector<int> read_labels(const std::filesystem::path& path) {
    const std::string data = read_file(path);
    std::vector<int> labels;
    for_each_line(data, [&](std::string_view line, std::size_t row) {
        line = trim(line);
        int v = 0;
        auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
        if (line.empty() || ec != std::errc() || ptr != line.data() + line.size()) {
            throw FormatError("cannot parse label '" + std::string(line) + "'", row);
        }
        if (v < 0) {
            throw FormatError("negative label", row);
        }
        labels.push_back(v);
    });
    return labels;
}

void write_labels(const std::vector<int>& labels, const std::filesystem::path& path) {
    std::string out;
    for (int l : labels) {
        out += std::to_string(l);
        out.push_back('\n');
    }
    write_file(path, out);
}

EmbeddingSet load_embeddings(const std::filesystem::path& path, FileFormat format,
                             const std::optional<std::filesystem::path>& labels) {
    const std::string data = read_file(path);
    EmbeddingSet set = format == FileFormat::binary ? parse_binary(data) : parse_csv(data);
    if (!labels) {
        return set;
    }
    std::vector<int> l = read_labels(*labels);
    if (l.size() != set.rows()) {
        throw FormatError("label file " + labels->string() + " has " + std::to_string(l.size()) +
                              " labels for " + std::to_string(set.rows()) + " rows",
                          std::min(l.size(), set.rows()));
    }
    return set.with_labels(std::move(l));
}

void save_embeddings(const EmbeddingSet& set, const std::filesystem::path& path, FileFormat format) {
    std::string out;
    if (format == FileFormat::binary) {
        if (set.rows() > std::numeric_limits<std::uint32_t>::max() ||
            set.cols() > std::numeric_limits<std::uint32_t>::max()) {
            throw InvalidArgument("matrix too large for the binary format");
        }
        out.reserve(12 + set.values().size() * 4);
        out.append(kMagic.data(), kMagic.size());
        put_u32_le(out, static_cast<std::uint32_t>(set.rows()));
        put_u32_le(out, static_cast<std::uint32_t>(set.cols()));
        for (std::size_t i = 0; i < set.values().size(); ++i) {
            const float f = static_cast<float>(set.values()[i]);
            if (!std::isfinite(f)) {
                throw InvalidArgument("value overflows float32 at row " +
                                      std::to_string(i / set.cols() + 1));
            }
            put_u32_le(out, std::bit_cast<std::uint32_t>(f));
        }
    } else {
        for (std::size_t i = 0; i < set.rows(); ++i) {
            auto row = set.row(i);
            for (std::size_t d = 0; d < row.size(); ++d) {
                if (d) out.push_back(',');
                append_double(out, row[d]);
            }
            out.push_back('\n');
        }
    }
    write_file(path, out);
    if (set.labels()) {
        write_labels(*set.labels(), labels_path_for(path));
    }
}

} // namespace hubness
