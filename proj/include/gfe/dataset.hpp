#pragma once

#include <charconv>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gfe/error.hpp"
#include "gfe/landmarks.hpp"
#include "gfe/markers.hpp"

namespace gfe {

class DatasetError : public Error {
public:
    explicit DatasetError(const std::string& what) : Error(what) {}
};

/// A data line with the wrong field count or a non-numeric token.
/// Line numbers are 1-based and count the header line.
class MalformedLine : public DatasetError {
public:
    int line;
    explicit MalformedLine(int line_)
        : DatasetError("malformed data line " + std::to_string(line_)), line(line_) {}
};

class EmptyFile : public DatasetError {
public:
    EmptyFile() : DatasetError("no data lines in datapoints file") {}
};

/// A targets line whose token is neither "0" nor "1".
class InvalidLabel : public DatasetError {
public:
    int line;
    std::string token;
    InvalidLabel(int line_, std::string token_)
        : DatasetError("invalid label '" + token_ + "' on line " + std::to_string(line_)),
          line(line_),
          token(std::move(token_)) {}
};

/// Datapoints and targets files with different sample counts.
class LengthMismatch : public DatasetError {
public:
    std::size_t n_frames, n_labels;
    LengthMismatch(std::size_t f, std::size_t l)
        : DatasetError("datapoints/targets length mismatch: " + std::to_string(f) + " frames vs " +
                       std::to_string(l) + " labels"),
          n_frames(f),
          n_labels(l) {}
};

/// The binary dataset for one (marker, user) pair. `labels[i]` is 1 when
/// the expression is present in `frames[i]`, 0 when absent.
struct MarkerDataset {
    MarkerClass marker = MarkerClass::Assertion;
    std::string user;  // "a", "b", or "ab" for the pooled set
    std::vector<LandmarkFrame> frames;
    std::vector<int> labels;

    std::size_t size() const { return frames.size(); }
};

struct DatasetSummary {
    long positives = 0;
    long negatives = 0;
    long total = 0;
};

namespace detail {

inline bool is_separator(char c) { return c == ' ' || c == '\t' || c == '\r' || c == ','; }

inline std::vector<std::string_view> tokenize(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && is_separator(line[i])) ++i;
        std::size_t start = i;
        while (i < line.size() && !is_separator(line[i])) ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

inline bool parse_double(std::string_view tok, double& out) {
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return ec == std::errc{} && ptr == tok.data() + tok.size() && std::isfinite(out);
}

/// Shortest exact decimal form of a double (round-trips bit-for-bit).
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    double back;
    // prefer a shorter form when it still round-trips
    for (int prec = 1; prec < 17; ++prec) {
        char shorter[32];
        std::snprintf(shorter, sizeof shorter, "%.*g", prec, v);
        if (std::from_chars(shorter, shorter + std::strlen(shorter), back).ec == std::errc{} &&
            back == v)
            return shorter;
    }
    return buf;
}

inline void for_each_line(std::string_view text, auto&& fn) {
    std::size_t pos = 0;
    int line_no = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        fn(line_no, text.substr(pos, end - pos));
        if (end == text.size()) break;
        pos = end + 1;
    }
}

}  // namespace detail

/// Parses a datapoints file: a header line, then one frame per non-empty
/// line as a timestamp followed by 300 reals (whitespace- or
/// comma-delimited). NaN/Inf tokens count as malformed.
inline std::vector<LandmarkFrame> parse_datapoints_file(std::string_view text) {
    std::vector<LandmarkFrame> frames;
    bool header_seen = false;
    detail::for_each_line(text, [&](int line_no, std::string_view line) {
        auto tokens = detail::tokenize(line);
        if (tokens.empty()) return;  // blank line
        if (!header_seen) {
            header_seen = true;  // column names, consumed
            return;
        }
        if (tokens.size() != std::size_t(kFrameDim) + 1) throw MalformedLine(line_no);
        LandmarkFrame frame;
        if (!detail::parse_double(tokens[0], frame.timestamp)) throw MalformedLine(line_no);
        for (int i = 0; i < kFrameDim; ++i)
            if (!detail::parse_double(tokens[i + 1], frame.coords[i])) throw MalformedLine(line_no);
        frames.push_back(frame);
    });
    if (frames.empty()) throw EmptyFile();
    return frames;
}

/// Parses a targets file: one "0" or "1" per non-empty line. An empty file
/// yields an empty label sequence.
inline std::vector<int> parse_targets_file(std::string_view text) {
    std::vector<int> labels;
    detail::for_each_line(text, [&](int line_no, std::string_view line) {
        auto tokens = detail::tokenize(line);
        if (tokens.empty()) return;
        if (tokens.size() != 1 || (tokens[0] != "0" && tokens[0] != "1"))
            throw InvalidLabel(line_no, std::string(tokens.size() == 1 ? tokens[0] : line));
        labels.push_back(tokens[0] == "1" ? 1 : 0);
    });
    return labels;
}

/// Inverse of parse_datapoints_file; numbers are written in their shortest
/// exact decimal form so parse(serialize(frames)) == frames.
inline std::string serialize_datapoints(const std::vector<LandmarkFrame>& frames) {
    std::ostringstream out;
    out << "timestamp";
    for (int p = 0; p < kNumPoints; ++p) out << " " << p << "x " << p << "y " << p << "z";
    out << "\n";
    for (const auto& frame : frames) {
        out << detail::format_double(frame.timestamp);
        for (double v : frame.coords) out << ' ' << detail::format_double(v);
        out << '\n';
    }
    return out.str();
}

inline std::string serialize_targets(const std::vector<int>& labels) {
    std::string out;
    for (int label : labels) {
        out += label ? '1' : '0';
        out += '\n';
    }
    return out;
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DatasetError("cannot open file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Loads and zips one (datapoints, targets) file pair.
inline MarkerDataset load_marker_dataset(const std::filesystem::path& datapoints_path,
                                         const std::filesystem::path& targets_path,
                                         MarkerClass marker, const std::string& user) {
    MarkerDataset ds;
    ds.marker = marker;
    ds.user = user;
    ds.frames = parse_datapoints_file(read_text_file(datapoints_path));
    ds.labels = parse_targets_file(read_text_file(targets_path));
    if (ds.frames.size() != ds.labels.size())
        throw LengthMismatch(ds.frames.size(), ds.labels.size());
    return ds;
}

inline DatasetSummary dataset_summary(const MarkerDataset& ds) {
    DatasetSummary s;
    for (int label : ds.labels) (label == 1 ? s.positives : s.negatives)++;
    s.total = static_cast<long>(ds.labels.size());
    return s;
}

// ---------------------------------------------------------------------------
// File discovery
// ---------------------------------------------------------------------------

/// Convention file names for one (user, marker) pair, e.g.
/// ("a_affirmative_datapoints.txt", "a_affirmative_targets.txt").
inline std::pair<std::string, std::string> dataset_file_names(const std::string& user,
                                                              MarkerClass marker) {
    std::string stem = user + "_" + std::string(marker_file_name(marker));
    return {stem + "_datapoints.txt", stem + "_targets.txt"};
}

/// Resolves the file pair for (user, marker) under data_root. A
/// `manifest.json` file in data_root may override the convention names:
/// { "<user>_<marker>": {"datapoints": "...", "targets": "..."} } with
/// paths relative to data_root. Returns nullopt when the files don't exist.
inline std::optional<std::pair<std::filesystem::path, std::filesystem::path>> locate_marker_files(
    const std::filesystem::path& data_root, const std::string& user, MarkerClass marker) {
    namespace fs = std::filesystem;
    fs::path manifest_path = data_root / "manifest.json";
    if (fs::exists(manifest_path)) {
        auto manifest = nlohmann::json::parse(read_text_file(manifest_path));
        std::string key = user + "_" + std::string(marker_name(marker));
        if (manifest.contains(key)) {
            const auto& entry = manifest.at(key);
            fs::path d = data_root / entry.at("datapoints").get<std::string>();
            fs::path t = data_root / entry.at("targets").get<std::string>();
            if (fs::exists(d) && fs::exists(t)) return {{d, t}};
            return std::nullopt;
        }
    }
    auto [dname, tname] = dataset_file_names(user, marker);
    fs::path d = data_root / dname, t = data_root / tname;
    if (fs::exists(d) && fs::exists(t)) return {{d, t}};
    return std::nullopt;
}

/// Loads (user, marker) from data_root; user "ab" pools users a and b.
inline MarkerDataset load_user_marker(const std::filesystem::path& data_root,
                                      const std::string& user, MarkerClass marker) {
    if (user == "ab") {
        MarkerDataset a = load_user_marker(data_root, "a", marker);
        MarkerDataset b = load_user_marker(data_root, "b", marker);
        a.user = "ab";
        a.frames.insert(a.frames.end(), b.frames.begin(), b.frames.end());
        a.labels.insert(a.labels.end(), b.labels.begin(), b.labels.end());
        return a;
    }
    auto files = locate_marker_files(data_root, user, marker);
    if (!files)
        throw DatasetError("dataset files for user '" + user + "', marker '" +
                           std::string(marker_name(marker)) + "' not found under " +
                           data_root.string());
    return load_marker_dataset(files->first, files->second, marker, user);
}

}  // namespace gfe
