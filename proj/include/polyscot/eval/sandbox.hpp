// Copyright 2026 The polyscot Authors. All rights reserved.
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

#pragma once

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "polyscot/core/hash.hpp"
#include "polyscot/core/language.hpp"
#include "polyscot/core/text.hpp"

namespace polyscot::eval {

namespace fs = std::filesystem;

enum class RunStatus { Pass, Fail, Timeout, CompileError, RuntimeError, Skipped };

inline constexpr std::string_view run_status_name(RunStatus s) {
  switch (s) {
    case RunStatus::Pass: return "Pass";
    case RunStatus::Fail: return "Fail";
    case RunStatus::Timeout: return "Timeout";
    case RunStatus::CompileError: return "CompileError";
    case RunStatus::RuntimeError: return "RuntimeError";
    case RunStatus::Skipped: return "Skipped";
  }
  return "?";
}

inline constexpr std::size_t kCaptureLimit = 64 * 1024;

struct RunResult {
  RunStatus status = RunStatus::Skipped;
  long long duration_ms = 0;
  std::string stdout_text;
  std::string stderr_text;
  bool truncated = false;
};

// Command templates are whitespace-split argv; {src}, {bin} and {dir} are
// substituted per argument.
struct LanguageRunner {
  std::string extension;
  std::string compile;  // empty: interpreted
  std::string run;
  int timeout_seconds = 30;
};

struct RunnerSpec {
  std::map<LanguageId, LanguageRunner> runners;
  std::vector<std::string> env_allowlist{"PATH", "HOME", "TMPDIR"};
};

inline RunnerSpec default_runner_spec() {
  RunnerSpec s;
  auto add = [&](LanguageId l, std::string compile, std::string run) {
    s.runners[l] = LanguageRunner{std::string(file_extension(l)), std::move(compile), std::move(run), 30};
  };
  add(LanguageId::Python, "", "python3 {src}");
  add(LanguageId::JavaScript, "", "node {src}");
  add(LanguageId::TypeScript, "tsc --strict --target es2020 --module commonjs --outDir {dir} {src}", "node {dir}/main.js");
  add(LanguageId::Perl, "", "perl {src}");
  add(LanguageId::Ruby, "", "ruby {src}");
  add(LanguageId::PHP, "", "php {src}");
  add(LanguageId::Go, "", "go run {src}");
  add(LanguageId::Java, "javac -d {dir} {src}", "java -cp {dir} Main");
  add(LanguageId::CSharp, "mcs -out:{bin} {src}", "mono {bin}");
  add(LanguageId::Kotlin, "kotlinc {src} -include-runtime -d {bin}.jar", "java -jar {bin}.jar");
  add(LanguageId::Scala, "scalac -d {dir} {src}", "scala -cp {dir} Main");
  add(LanguageId::Swift, "swiftc -o {bin} {src}", "{bin}");
  return s;
}

namespace detail {

inline std::vector<std::string> expand(std::string_view tmpl, const std::map<std::string, std::string>& vars) {
  std::vector<std::string> argv;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) argv.push_back(cur);
    cur.clear();
  };
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    char c = tmpl[i];
    if (text::is_space(c)) {
      flush();
      continue;
    }
    if (c == '{') {
      std::size_t close = tmpl.find('}', i);
      if (close != std::string_view::npos) {
        auto it = vars.find(std::string(tmpl.substr(i + 1, close - i - 1)));
        if (it != vars.end()) {
          cur += it->second;
          i = close;
          continue;
        }
      }
    }
    cur += c;
  }
  flush();
  return argv;
}

// PATH lookup without executing anything.
inline bool on_path(const std::string& exe) {
  if (exe.find('/') != std::string::npos) return ::access(exe.c_str(), X_OK) == 0;
  const char* path = std::getenv("PATH");
  if (!path) return false;
  std::string p(path);
  std::size_t start = 0;
  while (start <= p.size()) {
    std::size_t end = p.find(':', start);
    if (end == std::string::npos) end = p.size();
    std::string dir = p.substr(start, end - start);
    if (dir.empty()) dir = ".";
    if (::access((dir + "/" + exe).c_str(), X_OK) == 0) return true;
    start = end + 1;
  }
  return false;
}

struct ProcResult {
  int exit_code = -1;
  int signal = 0;
  bool timed_out = false;
  long long duration_ms = 0;
  std::string out, err;
  bool truncated = false;
};

inline void append_capped(std::string& dst, const char* buf, std::size_t n, bool& truncated) {
  std::size_t room = dst.size() < kCaptureLimit ? kCaptureLimit - dst.size() : 0;
  if (n > room) truncated = true;
  dst.append(buf, std::min(n, room));
}

// fork/exec in a fresh process group with a filtered environment; the whole
// group is SIGKILLed on timeout or cancellation.
inline ProcResult spawn(const std::vector<std::string>& argv, const fs::path& cwd,
                        const std::vector<std::string>& env_allow, std::chrono::milliseconds limit,
                        const std::atomic<bool>* cancel = nullptr) {
  ProcResult r;
  int out_pipe[2], err_pipe[2];
  if (::pipe2(out_pipe, O_CLOEXEC) != 0 || ::pipe2(err_pipe, O_CLOEXEC) != 0)
    throw IoError(std::string("pipe: ") + std::strerror(errno));

  std::vector<std::string> env_store;
  for (const auto& name : env_allow)
    if (const char* v = std::getenv(name.c_str())) env_store.push_back(name + "=" + v);
  std::vector<char*> envp, args;
  for (auto& e : env_store) envp.push_back(e.data());
  envp.push_back(nullptr);
  std::vector<std::string> argv_store = argv;
  for (auto& a : argv_store) args.push_back(a.data());
  args.push_back(nullptr);
  std::string cwd_s = cwd.string();

  auto start = std::chrono::steady_clock::now();
  pid_t pid = ::fork();
  if (pid < 0) throw IoError(std::string("fork: ") + std::strerror(errno));
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(out_pipe[1], 1);
    ::dup2(err_pipe[1], 2);
    int devnull = ::open("/dev/null", O_RDONLY);
    if (devnull >= 0) ::dup2(devnull, 0);
    if (::chdir(cwd_s.c_str()) != 0) ::_exit(126);
    ::execvpe(args[0], args.data(), envp.data());
    ::_exit(127);
  }
  ::setpgid(pid, pid);  // closes the race with the child's own setpgid
  ::close(out_pipe[1]);
  ::close(err_pipe[1]);

  pollfd fds[2] = {{out_pipe[0], POLLIN, 0}, {err_pipe[0], POLLIN, 0}};
  int open_fds = 2;
  char buf[8192];
  bool killed = false;
  auto deadline = start + limit;
  while (open_fds > 0) {
    auto now = std::chrono::steady_clock::now();
    if (!killed && (now >= deadline || (cancel && cancel->load()))) {
      r.timed_out = now >= deadline;
      ::kill(-pid, SIGKILL);
      killed = true;
    }
    int wait_ms = killed ? 100 : static_cast<int>(std::min<long long>(
        100, std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count() + 1));
    int n = ::poll(fds, 2, wait_ms);
    if (n < 0 && errno != EINTR) break;
    for (int i = 0; i < 2; ++i) {
      if (fds[i].fd < 0 || !(fds[i].revents & (POLLIN | POLLHUP | POLLERR))) continue;
      ssize_t got = ::read(fds[i].fd, buf, sizeof buf);
      if (got > 0) {
        append_capped(i == 0 ? r.out : r.err, buf, static_cast<std::size_t>(got), r.truncated);
      } else {
        ::close(fds[i].fd);
        fds[i].fd = -1;
        --open_fds;
      }
    }
  }
  int status = 0;
  for (;;) {
    pid_t w = ::waitpid(pid, &status, killed ? 0 : WNOHANG);
    if (w == pid) break;
    if (w < 0 && errno != EINTR) break;
    if (w == 0) {
      if (std::chrono::steady_clock::now() >= deadline || (cancel && cancel->load())) {
        r.timed_out = std::chrono::steady_clock::now() >= deadline;
        ::kill(-pid, SIGKILL);
        killed = true;
      } else {
        ::usleep(5000);
      }
    }
  }
  // Grandchildren may still hold the group; make sure nothing survives.
  ::kill(-pid, SIGKILL);
  r.duration_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  if (WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
  if (WIFSIGNALED(status)) r.signal = WTERMSIG(status);
  return r;
}

class TempDir {
 public:
  TempDir() {
    const char* base = std::getenv("TMPDIR");
    std::string tmpl = std::string(base && *base ? base : "/tmp") + "/polyscot-run-XXXXXX";
    if (!::mkdtemp(tmpl.data())) throw IoError(std::string("mkdtemp: ") + std::strerror(errno));
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

}  // namespace detail

// Source file name per language; compiled languages expect a `Main` entry.
inline std::string source_name(LanguageId l) {
  switch (l) {
    case LanguageId::Java:
    case LanguageId::Scala:
    case LanguageId::CSharp:
    case LanguageId::Kotlin: return "Main" + std::string(file_extension(l));
    default: return "main" + std::string(file_extension(l));
  }
}

inline bool toolchain_available(const LanguageRunner& r) {
  std::map<std::string, std::string> vars{{"src", "x"}, {"bin", "x"}, {"dir", "x"}};
  for (const auto& tmpl : {r.compile, r.run}) {
    if (tmpl.empty()) continue;
    auto argv = detail::expand(tmpl, vars);
    if (argv.empty()) return false;
    if (argv[0] == "x") continue;  // the built binary itself
    if (!detail::on_path(argv[0])) return false;
  }
  return true;
}

// Writes code + tests into a fresh temp dir, compiles if configured, runs with
// a wall-clock limit. Exit status 0 is Pass; every failure is a status.
inline RunResult run_candidate(LanguageId lang, std::string_view code, std::string_view tests, const RunnerSpec& spec,
                               const std::atomic<bool>* cancel = nullptr) {
  RunResult res;
  auto it = spec.runners.find(lang);
  if (it == spec.runners.end() || !toolchain_available(it->second)) {
    res.status = RunStatus::Skipped;
    res.stderr_text = "no runner or toolchain for " + std::string(language_name(lang));
    return res;
  }
  const LanguageRunner& runner = it->second;
  detail::TempDir dir;
  fs::path src = dir.path() / source_name(lang);
  write_file(src.string(), std::string(code) + "\n" + std::string(tests) + "\n");
  std::map<std::string, std::string> vars{
      {"src", src.string()}, {"bin", (dir.path() / "main.bin").string()}, {"dir", dir.path().string()}};
  auto limit = std::chrono::milliseconds(static_cast<long long>(runner.timeout_seconds) * 1000);
  auto begin = std::chrono::steady_clock::now();
  if (!runner.compile.empty()) {
    auto c = detail::spawn(detail::expand(runner.compile, vars), dir.path(), spec.env_allowlist, limit, cancel);
    if (c.timed_out || c.exit_code != 0) {
      res.status = c.timed_out ? RunStatus::Timeout : RunStatus::CompileError;
      res.duration_ms = c.duration_ms;
      res.stdout_text = std::move(c.out);
      res.stderr_text = std::move(c.err);
      res.truncated = c.truncated;
      return res;
    }
  }
  auto remaining = limit - std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - begin);
  if (remaining.count() < 1) remaining = std::chrono::milliseconds(1);
  auto r = detail::spawn(detail::expand(runner.run, vars), dir.path(), spec.env_allowlist, remaining, cancel);
  res.duration_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - begin).count();
  res.stdout_text = std::move(r.out);
  res.stderr_text = std::move(r.err);
  res.truncated = r.truncated;
  if (r.timed_out) res.status = RunStatus::Timeout;
  else if (r.signal != 0) res.status = RunStatus::RuntimeError;
  else if (r.exit_code == 0) res.status = RunStatus::Pass;
  else if (r.exit_code == 127 && res.stdout_text.empty() && res.stderr_text.empty()) res.status = RunStatus::Skipped;
  else res.status = RunStatus::Fail;
  return res;
}

}  // namespace polyscot::eval
