#include "mgen/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

namespace mgen {

namespace {
constexpr const char* kMagic = "MGENCKPT 1";

void write_doubles(std::ostream& os, const Tensor& t) {
  static_assert(sizeof(double) == 8);
  os.write(reinterpret_cast<const char*>(t.data()),
           static_cast<std::streamsize>(t.size() * sizeof(double)));
}
}  // namespace

void save_checkpoint(const std::string& path,
                     const std::map<std::string, std::string>& config,
                     const ParamStore& params) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail("save_checkpoint: cannot open " + path);
  os << kMagic << "\n";
  os << "step " << params.step() << "\n";
  for (const auto& [k, v] : config) os << "cfg " << k << " " << v << "\n";
  for (const auto& [name, p] : params) {
    os << "param " << name << " " << p.value.rank();
    for (std::size_t d : p.value.shape()) os << " " << d;
    os << "\n";
  }
  os << "end\n";
  for (const auto& [name, p] : params) write_doubles(os, p.value);
  if (!os) fail("save_checkpoint: write failed for " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail("load_checkpoint: cannot open " + path);
  std::string line;
  if (!std::getline(is, line) || line != kMagic)
    fail("load_checkpoint: bad magic in " + path);

  Checkpoint ck;
  std::vector<std::string> order;
  while (std::getline(is, line)) {
    if (line == "end") break;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "step") {
      long s = 0;
      ls >> s;
      ck.params.set_step(s);
    } else if (tag == "cfg") {
      std::string key;
      ls >> key;
      std::string rest;
      std::getline(ls, rest);
      if (!rest.empty() && rest.front() == ' ') rest.erase(0, 1);
      ck.config[key] = rest;
    } else if (tag == "param") {
      std::string name;
      std::size_t rank = 0;
      ls >> name >> rank;
      std::vector<std::size_t> shape(rank);
      for (auto& d : shape) ls >> d;
      if (!ls) fail("load_checkpoint: malformed param line: " + line);
      ck.params.create(name, shape);
      order.push_back(name);
    } else {
      fail("load_checkpoint: unknown header line: " + line);
    }
  }
  for (const auto& name : order) {
    Tensor& t = ck.params.value(name);
    is.read(reinterpret_cast<char*>(t.data()),
            static_cast<std::streamsize>(t.size() * sizeof(double)));
    if (!is) fail("load_checkpoint: truncated data for '" + name + "'");
  }
  return ck;
}

}  // namespace mgen
