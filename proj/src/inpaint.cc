// Copyright 2026 The stereosynth Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "stereosynth/inpaint.h"

#include <fcntl.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <condition_variable>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <vector>

#include "stereosynth/error.h"
#include "stereosynth/image_io.h"
#include "stereosynth/rng.h"

extern char** environ;

namespace stereosynth {
namespace {

void check_request(const InpaintRequest& req) {
  if (req.mask.width() != req.image.width() || req.mask.height() != req.image.height()) {
    throw Error("inpaint: mask dimensions do not match the image");
  }
}

void copy_pixel(std::vector<std::uint8_t>& dst, std::size_t to, std::span<const std::uint8_t> src, std::size_t from) {
  dst[to * 3] = src[from * 3];
  dst[to * 3 + 1] = src[from * 3 + 1];
  dst[to * 3 + 2] = src[from * 3 + 2];
}

class ProcessLimiter {
 public:
  void set_limit(int n) {
    std::lock_guard lock(mu_);
    limit_ = n < 1 ? 1 : n;
    cv_.notify_all();
  }
  void acquire() {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return running_ < limit_; });
    ++running_;
  }
  void release() {
    std::lock_guard lock(mu_);
    --running_;
    cv_.notify_one();
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  int limit_ = 1;
  int running_ = 0;
};

ProcessLimiter& limiter() {
  static ProcessLimiter instance;
  return instance;
}

struct LimiterSlot {
  LimiterSlot() { limiter().acquire(); }
  ~LimiterSlot() { limiter().release(); }
  LimiterSlot(const LimiterSlot&) = delete;
  LimiterSlot& operator=(const LimiterSlot&) = delete;
};

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

std::string substitute(std::string tmpl, std::string_view key, const std::string& value) {
  std::size_t pos = 0;
  while ((pos = tmpl.find(key, pos)) != std::string::npos) {
    tmpl.replace(pos, key.size(), value);
    pos += value.size();
  }
  return tmpl;
}

std::filesystem::path make_private_dir(const std::filesystem::path& parent) {
  std::filesystem::create_directories(parent);
  std::string pattern = (parent / "inpaint-XXXXXX").string();
  if (mkdtemp(pattern.data()) == nullptr) throw Error("cannot create backend workdir under '" + parent.string() + "'");
  return pattern;
}

// Runs `sh -c command` with stdout and stderr redirected to files; returns the
// wait status.
int run_shell(const std::string& command, const std::filesystem::path& out_log, const std::filesystem::path& err_log) {
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, STDIN_FILENO, "/dev/null", O_RDONLY, 0);
  posix_spawn_file_actions_addopen(&actions, STDOUT_FILENO, out_log.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  posix_spawn_file_actions_addopen(&actions, STDERR_FILENO, err_log.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  std::string sh = "/bin/sh";
  std::string dash_c = "-c";
  std::string cmd = command;
  char* argv[] = {sh.data(), dash_c.data(), cmd.data(), nullptr};
  pid_t pid = 0;
  const int rc = posix_spawn(&pid, "/bin/sh", &actions, nullptr, argv, environ);
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) throw Error("cannot spawn inpaint backend: " + std::string(std::strerror(rc)));
  int status = 0;
  while (waitpid(pid, &status, 0) < 0) {
    if (errno != EINTR) throw Error("waitpid failed for inpaint backend");
  }
  return status;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string_view to_string(InpaintBackend backend) {
  switch (backend) {
    case InpaintBackend::random_fill:
      return "random";
    case InpaintBackend::background_propagate:
      return "propagate";
    case InpaintBackend::external:
      return "external";
  }
  return "unknown";
}

std::optional<InpaintBackend> parse_inpaint_backend(std::string_view name) {
  if (name == "random") return InpaintBackend::random_fill;
  if (name == "propagate") return InpaintBackend::background_propagate;
  if (name == "external") return InpaintBackend::external;
  return std::nullopt;
}

ImagePlane inpaint_random(const InpaintRequest& req) {
  check_request(req);
  const auto bits = req.mask.bits();
  std::vector<std::uint32_t> known;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (!bits[i]) known.push_back(static_cast<std::uint32_t>(i));
  }
  if (known.empty()) throw Error("inpaint_random: image is entirely holes");
  const auto src = req.image.data();
  std::vector<std::uint8_t> out(src.begin(), src.end());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (!bits[i]) continue;
    CounterRng rng(req.rng_seed, i);
    copy_pixel(out, i, src, known[rng.below(known.size())]);
  }
  return ImagePlane(req.image.width(), req.image.height(), std::move(out));
}

ImagePlane inpaint_background_propagate(const InpaintRequest& req) {
  check_request(req);
  const int width = req.image.width();
  const int height = req.image.height();
  const auto src = req.image.data();
  std::vector<std::uint8_t> out(src.begin(), src.end());
  std::vector<std::uint8_t> row_known(static_cast<std::size_t>(height), 0);

  for (int y = 0; y < height; ++y) {
    const std::size_t base = static_cast<std::size_t>(y) * width;
    // Nearest known pixel to the right, then to the left.
    std::vector<int> source(static_cast<std::size_t>(width), -1);
    int next_known = -1;
    for (int x = width - 1; x >= 0; --x) {
      if (!req.mask.at(x, y)) next_known = x;
      source[x] = next_known;
    }
    int prev_known = -1;
    for (int x = 0; x < width; ++x) {
      if (!req.mask.at(x, y)) prev_known = x;
      if (source[x] < 0) source[x] = prev_known;
    }
    if (prev_known < 0) continue;
    row_known[y] = 1;
    for (int x = 0; x < width; ++x) {
      if (req.mask.at(x, y)) copy_pixel(out, base + x, src, base + source[x]);
    }
  }

  for (int y = 0; y < height; ++y) {
    if (row_known[y]) continue;
    int donor = -1;
    for (int dist = 1; dist < height && donor < 0; ++dist) {
      if (y - dist >= 0 && row_known[y - dist]) {
        donor = y - dist;
      } else if (y + dist < height && row_known[y + dist]) {
        donor = y + dist;
      }
    }
    if (donor < 0) throw Error("inpaint_background_propagate: image is entirely holes");
    const std::span<const std::uint8_t> filled(out);
    for (int x = 0; x < width; ++x) {
      copy_pixel(out, static_cast<std::size_t>(y) * width + x, filled, static_cast<std::size_t>(donor) * width + x);
    }
  }
  return ImagePlane(width, height, std::move(out));
}

ExternalInpaintResult inpaint_external(const InpaintRequest& req, const ExternalBackendConfig& backend) {
  check_request(req);
  // {mask} is optional: an identity backend has no use for it.
  for (const char* key : {"{image}", "{output}"}) {
    if (backend.command_template.find(key) == std::string::npos) {
      throw ConfigError(std::string("backend command template lacks the ") + key + " placeholder");
    }
  }
  const std::filesystem::path dir = make_private_dir(backend.workdir.empty() ? std::filesystem::temp_directory_path()
                                                                             : backend.workdir);
  const auto image_path = dir / "image.png";
  const auto mask_path = dir / "mask.png";
  const auto output_path = dir / "output.png";
  write_image(req.image, image_path);
  write_mask_png(req.mask, mask_path);

  std::string command = substitute(backend.command_template, "{image}", shell_quote(image_path.string()));
  command = substitute(command, "{mask}", shell_quote(mask_path.string()));
  command = substitute(command, "{output}", shell_quote(output_path.string()));

  int status = 0;
  {
    LimiterSlot slot;
    status = run_shell(command, dir / "stdout.log", dir / "stderr.log");
  }
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    const std::string err = slurp(dir / "stderr.log");
    const std::string how = WIFEXITED(status) ? "exited with status " + std::to_string(WEXITSTATUS(status))
                                              : std::string("was terminated by a signal");
    throw Error("inpaint backend " + how + "; stderr: " + err);
  }
  if (!std::filesystem::exists(output_path)) throw Error("inpaint backend produced no output file");

  ImagePlane result = [&] {
    try {
      return read_image(output_path);
    } catch (const Error& e) {
      throw Error(std::string("inpaint backend output unreadable: ") + e.what());
    }
  }();
  if (result.width() != req.image.width() || result.height() != req.image.height()) {
    throw Error("inpaint backend output dimension mismatch: expected " + std::to_string(req.image.width()) + "x" +
                std::to_string(req.image.height()) + ", got " + std::to_string(result.width()) + "x" +
                std::to_string(result.height()));
  }

  std::size_t drifted = 0;
  const auto a = req.image.data();
  const auto b = result.data();
  for (std::size_t i = 0; i < req.image.pixel_count(); ++i) {
    if (req.mask.bits()[i]) continue;
    for (int c = 0; c < 3; ++c) {
      if (std::abs(static_cast<int>(a[i * 3 + c]) - static_cast<int>(b[i * 3 + c])) > 2) {
        ++drifted;
        break;
      }
    }
  }
  if (drifted > 0) {
    std::cerr << "warning: inpaint backend changed " << drifted << " pixels outside the mask\n";
  }
  if (!backend.keep_files) {
    std::error_code ec;
    std::filesystem::remove_all(dir, ec);
  }
  return ExternalInpaintResult{std::move(result), drifted};
}

void set_external_backend_concurrency(int max_processes) { limiter().set_limit(max_processes); }

ImagePlane inpaint(const InpaintRequest& req, const ExternalBackendConfig* external) {
  switch (req.backend) {
    case InpaintBackend::random_fill:
      return inpaint_random(req);
    case InpaintBackend::background_propagate:
      return inpaint_background_propagate(req);
    case InpaintBackend::external:
      if (external == nullptr) throw ConfigError("external inpaint backend selected without a command");
      return inpaint_external(req, *external).image;
  }
  throw Error("inpaint: unknown backend");
}

}  // namespace stereosynth
