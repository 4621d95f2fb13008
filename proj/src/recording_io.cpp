#include "betagate/recording_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "betagate/num.hpp"

namespace betagate {

std::string recording_to_csv(const MultiChannelRecording& rec) {
  rec.layout.validate();
  std::string out;
  out.reserve(rec.frames.size() * 12 * rec.layout.size() + 64);
  out += "# rate=";
  out += format_double(rec.layout.sample_rate);
  out += '\n';
  for (size_t c = 0; c < rec.layout.names.size(); ++c) {
    if (c) out += ',';
    out += rec.layout.names[c];
  }
  out += '\n';
  for (const auto& frame : rec.frames) {
    for (size_t c = 0; c < frame.size(); ++c) {
      if (c) out += ',';
      out += format_double(frame[c]);
    }
    out += '\n';
  }
  return out;
}

void save_recording(const MultiChannelRecording& rec, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw EngineError("cannot write recording file '" + path + "'");
  out << recording_to_csv(rec);
  if (!out) throw EngineError("write failed for recording file '" + path + "'");
}

namespace {

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> cells;
  size_t pos = 0;
  while (true) {
    const size_t comma = line.find(',', pos);
    if (comma == std::string_view::npos) {
      cells.push_back(line.substr(pos));
      break;
    }
    cells.push_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
  return cells;
}

}  // namespace

MultiChannelRecording recording_from_csv(const std::string& text) {
  MultiChannelRecording rec;
  std::istringstream in(text);
  std::string line;
  size_t line_no = 0;

  // comment header with the rate
  if (!std::getline(in, line)) throw ParseError("recording is empty", 1);
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.rfind("# rate=", 0) != 0) {
    throw ParseError("recording must start with '# rate=<Hz>'", line_no);
  }
  {
    const std::string rate_text = line.substr(7);
    const char* first = rate_text.data();
    const char* last = first + rate_text.size();
    auto [p, ec] = std::from_chars(first, last, rec.layout.sample_rate);
    if (ec != std::errc() || p != last || !(rec.layout.sample_rate > 0)) {
      throw ParseError("bad sample rate '" + rate_text + "'", line_no);
    }
  }

  if (!std::getline(in, line)) throw ParseError("recording has no channel header", line_no + 1);
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  for (auto name : split_csv(line)) rec.layout.names.emplace_back(name);
  rec.layout.validate();

  const size_t n_ch = rec.layout.size();
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != n_ch) {
      throw ParseError("expected " + std::to_string(n_ch) + " columns, got " +
                           std::to_string(cells.size()),
                       line_no);
    }
    Frame frame(n_ch);
    for (size_t c = 0; c < n_ch; ++c) {
      const auto cell = cells[c];
      auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), frame[c]);
      if (ec != std::errc() || p != cell.data() + cell.size()) {
        throw ParseError("non-numeric cell '" + std::string(cell) + "'", line_no);
      }
    }
    rec.frames.push_back(std::move(frame));
  }
  return rec;
}

MultiChannelRecording load_recording(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw EngineError("cannot read recording file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return recording_from_csv(ss.str());
}

}  // namespace betagate
