// Copyright 2026 The dccrn-cpp Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dccrn/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

namespace dccrn {

namespace {

constexpr const char* kMagic = "dccrn.checkpoint.v1";

void write_tensor(std::ofstream& os, const std::string& name,
                  const ComplexTensor<float>& t, bool is_complex) {
  os << name << " " << (is_complex ? "complex" : "real") << " "
     << t.rank();
  for (size_t d : t.shape()) os << " " << d;
  os << "\n";
  os.write(reinterpret_cast<const char*>(t.re.data()),
           static_cast<std::streamsize>(t.re.size() * sizeof(float)));
  if (is_complex) {
    os.write(reinterpret_cast<const char*>(t.im.data()),
             static_cast<std::streamsize>(t.im.size() * sizeof(float)));
  }
}

struct TensorRecord {
  std::string name;
  bool is_complex;
  ComplexTensor<float> value;
};

TensorRecord read_tensor(std::ifstream& is, const std::string& path) {
  std::string line;
  if (!std::getline(is, line)) {
    throw DataError("checkpoint '" + path + "': truncated tensor table");
  }
  std::istringstream hs(line);
  TensorRecord rec;
  std::string kind;
  size_t rank = 0;
  hs >> rec.name >> kind >> rank;
  if (hs.fail() || (kind != "complex" && kind != "real")) {
    throw DataError("checkpoint '" + path + "': bad tensor header '" + line +
                    "'");
  }
  rec.is_complex = kind == "complex";
  std::vector<size_t> shape(rank);
  for (size_t i = 0; i < rank; ++i) hs >> shape[i];
  if (hs.fail()) {
    throw DataError("checkpoint '" + path + "': bad tensor shape in '" +
                    line + "'");
  }
  rec.value = ComplexTensor<float>(shape);
  is.read(reinterpret_cast<char*>(rec.value.re.data()),
          static_cast<std::streamsize>(rec.value.re.size() * sizeof(float)));
  if (rec.is_complex) {
    is.read(reinterpret_cast<char*>(rec.value.im.data()),
            static_cast<std::streamsize>(rec.value.im.size() * sizeof(float)));
  }
  if (!is) {
    throw DataError("checkpoint '" + path + "': truncated tensor data for '" +
                    rec.name + "'");
  }
  return rec;
}

}  // namespace

void save_checkpoint(const std::string& path, Model<float>& model) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("checkpoint: cannot write '" + path + "'");
  os << kMagic << "\n";
  for (const auto& [k, v] : model.config().to_kv()) {
    os << "config." << k << "=" << v << "\n";
  }
  ParamList<float> params = model.named_params();
  BufferList<float> bufs = model.buffers();
  os << "tensors=" << (params.size() + bufs.size()) << "\n";
  for (const auto& p : params) {
    write_tensor(os, p.var->name, p.var->value, p.is_complex);
  }
  for (const auto& [name, tensor] : bufs) {
    write_tensor(os, "buf." + name, *tensor, true);
  }
  if (!os) throw DataError("checkpoint: write failed for '" + path + "'");
}

namespace {

std::map<std::string, std::string> read_header(
    std::ifstream& is, const std::string& path, size_t* tensor_count) {
  std::string line;
  if (!std::getline(is, line) || line != kMagic) {
    throw DataError("checkpoint '" + path +
                    "': format version mismatch (expected " + kMagic + ")");
  }
  std::map<std::string, std::string> kv;
  *tensor_count = 0;
  while (std::getline(is, line)) {
    if (line.rfind("tensors=", 0) == 0) {
      *tensor_count = std::stoull(line.substr(8));
      return kv;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos || line.rfind("config.", 0) != 0) {
      throw DataError("checkpoint '" + path + "': malformed header line '" +
                      line + "'");
    }
    kv[line.substr(7, eq - 7)] = line.substr(eq + 1);
  }
  throw DataError("checkpoint '" + path + "': missing tensor table");
}

}  // namespace

ModelConfig read_checkpoint_config(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("checkpoint: cannot open '" + path + "'");
  size_t n = 0;
  return ModelConfig::from_kv(read_header(is, path, &n));
}

Model<float> load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("checkpoint: cannot open '" + path + "'");
  size_t tensor_count = 0;
  ModelConfig config = ModelConfig::from_kv(read_header(is, path, &tensor_count));
  Model<float> model = Model<float>::build(config);

  std::map<std::string, TensorRecord> records;
  for (size_t i = 0; i < tensor_count; ++i) {
    TensorRecord rec = read_tensor(is, path);
    records[rec.name] = std::move(rec);
  }

  for (const auto& p : model.named_params()) {
    auto it = records.find(p.var->name);
    if (it == records.end()) {
      throw DataError("checkpoint '" + path + "': missing parameter '" +
                      p.var->name + "'");
    }
    if (!(it->second.value.shape() == p.var->value.shape())) {
      throw DataError("checkpoint '" + path + "': shape mismatch for '" +
                      p.var->name + "': file " +
                      shape_str(it->second.value.shape()) + " vs model " +
                      shape_str(p.var->value.shape()));
    }
    p.var->value = std::move(it->second.value);
  }
  for (auto& [name, tensor] : model.buffers()) {
    auto it = records.find("buf." + name);
    if (it == records.end()) {
      throw DataError("checkpoint '" + path + "': missing buffer '" + name +
                      "'");
    }
    *tensor = std::move(it->second.value);
  }
  return model;
}

}  // namespace dccrn
