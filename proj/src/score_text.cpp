#include "mgen/score_text.hpp"

#include <array>
#include <sstream>

namespace mgen {

namespace {

constexpr std::array<const char*, 12> kPcNames = {
    "C", "C#", "D", "D#", "E", "F", "F#", "G", "G#", "A", "A#", "B"};

int parse_root(const std::string& name) {
  for (int i = 0; i < 12; ++i)
    if (name == kPcNames[i]) return i;
  return -1;
}

[[noreturn]] void line_fail(std::size_t lineno, const std::string& msg) {
  fail("score text line " + std::to_string(lineno) + ": " + msg);
}

ChordEvent parse_chord_name(const std::string& name, long onset, long dur,
                            std::size_t lineno) {
  ChordEvent c;
  c.onset_ticks = onset;
  c.duration_ticks = dur;
  if (name == "NC") return c;
  if (name.rfind("pcs:{", 0) == 0) {
    if (name.back() != '}') line_fail(lineno, "unterminated pitch-class set");
    std::string body = name.substr(5, name.size() - 6);
    std::istringstream bs(body);
    std::string tok;
    while (std::getline(bs, tok, ',')) {
      if (tok.empty()) continue;
      int pc = 0;
      try {
        pc = std::stoi(tok);
      } catch (const std::exception&) {
        line_fail(lineno, "bad pitch class '" + tok + "'");
      }
      if (pc < 0 || pc > 11) line_fail(lineno, "pitch class out of range");
      c.pitch_classes.insert(pc);
    }
    return c;
  }
  const auto colon = name.find(':');
  if (colon == std::string::npos)
    line_fail(lineno, "bad chord name '" + name + "'");
  const int root = parse_root(name.substr(0, colon));
  if (root < 0) line_fail(lineno, "unknown chord root in '" + name + "'");
  const std::string quality = name.substr(colon + 1);
  c.root = root;
  if (quality == "maj") {
    c.pitch_classes = {root, (root + 4) % 12, (root + 7) % 12};
  } else if (quality == "min") {
    c.pitch_classes = {root, (root + 3) % 12, (root + 7) % 12};
  } else {
    line_fail(lineno, "unknown chord quality '" + quality + "'");
  }
  return c;
}

}  // namespace

const char* pitch_class_name(int pc) { return kPcNames[((pc % 12) + 12) % 12]; }

SymbolicScore parse_score_text(const std::string& text) {
  SymbolicScore score;
  bool saw_bpm = false, saw_tpb = false, saw_event = false;

  std::istringstream is(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "bpm") {
      if (!(ls >> score.bpm) || score.bpm <= 0.0)
        line_fail(lineno, "bad bpm value");
      saw_bpm = true;
    } else if (tag == "tpb") {
      if (!(ls >> score.ticks_per_beat) || score.ticks_per_beat <= 0)
        line_fail(lineno, "bad tpb value");
      saw_tpb = true;
    } else if (tag == "N") {
      NoteEvent n;
      if (!(ls >> n.onset_ticks >> n.duration_ticks >> n.pitch))
        line_fail(lineno, "malformed note line");
      if (n.pitch < 0 || n.pitch > 127) line_fail(lineno, "pitch out of range");
      if (n.duration_ticks <= 0) line_fail(lineno, "duration out of range");
      if (n.onset_ticks < 0) line_fail(lineno, "negative onset");
      score.melody.push_back(n);
      saw_event = true;
    } else if (tag == "C") {
      long onset = 0, dur = 0;
      std::string name;
      if (!(ls >> onset >> dur >> name))
        line_fail(lineno, "malformed chord line");
      if (dur <= 0) line_fail(lineno, "duration out of range");
      if (onset < 0) line_fail(lineno, "negative onset");
      score.chords.push_back(parse_chord_name(name, onset, dur, lineno));
      saw_event = true;
    } else {
      line_fail(lineno, "unknown directive '" + tag + "'");
    }
  }
  if (!saw_bpm) fail("score text: missing bpm header");
  if (!saw_tpb) fail("score text: missing tpb header");
  if (!saw_event) fail("score text: no events");
  validate_score(score);
  return score;
}

std::string render_score_text(const SymbolicScore& score) {
  std::ostringstream os;
  os << "bpm " << score.bpm << "\n";
  os << "tpb " << score.ticks_per_beat << "\n";
  for (const auto& n : score.melody)
    os << "N " << n.onset_ticks << " " << n.duration_ticks << " " << n.pitch
       << "\n";
  for (const auto& c : score.chords) {
    os << "C " << c.onset_ticks << " " << c.duration_ticks << " ";
    if (c.pitch_classes.empty()) {
      os << "NC";
    } else if (c.root) {
      const int r = *c.root;
      const std::set<int> maj = {r, (r + 4) % 12, (r + 7) % 12};
      const std::set<int> min = {r, (r + 3) % 12, (r + 7) % 12};
      if (c.pitch_classes == maj) {
        os << kPcNames[r] << ":maj";
      } else if (c.pitch_classes == min) {
        os << kPcNames[r] << ":min";
      } else {
        os << "pcs:{";
        bool first = true;
        for (int pc : c.pitch_classes) {
          if (!first) os << ",";
          os << pc;
          first = false;
        }
        os << "}";
      }
    } else {
      os << "pcs:{";
      bool first = true;
      for (int pc : c.pitch_classes) {
        if (!first) os << ",";
        os << pc;
        first = false;
      }
      os << "}";
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace mgen
