// Copyright 2026 The wmlab Authors
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

#include "wmlab/python_runtime.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "wmlab/error.h"

extern char** environ;

namespace wmlab {

namespace {

constexpr const char* kDriver = R"PY(
import ast, contextlib, io, json, signal, sys

class Timeout(Exception):
    pass

def on_alarm(signum, frame):
    raise Timeout()

signal.signal(signal.SIGALRM, on_alarm)
with open(sys.argv[1], encoding="utf-8") as fh:
    request = json.load(fh)
limit = float(request["timeout"])
results = []
for job in request["jobs"]:
    result = {"status": "ok", "values": [], "message": ""}
    sink = io.StringIO()
    try:
        with contextlib.redirect_stdout(sink):
            env = {"__name__": "__wmlab__"}
            signal.setitimer(signal.ITIMER_REAL, limit)
            try:
                exec(compile(job["source"], "<program>", "exec"), env)
            finally:
                signal.setitimer(signal.ITIMER_REAL, 0)
            fn = env[job["entry"]]
            for text in job["args"]:
                args = ast.literal_eval(text)
                signal.setitimer(signal.ITIMER_REAL, limit)
                try:
                    value = fn(*args)
                finally:
                    signal.setitimer(signal.ITIMER_REAL, 0)
                result["values"].append(repr(value))
                sink.seek(0)
                sink.truncate()
    except Timeout:
        result = {"status": "timeout", "values": [], "message": ""}
    except BaseException as exc:
        result = {"status": "error", "values": [],
                  "message": type(exc).__name__ + ": " + str(exc)}
    results.append(result)
json.dump(results, sys.stdout)
)PY";

struct ProcessOutput {
  int exit_code = -1;
  bool timed_out = false;
  std::string out;
};

// Runs argv with stdout captured and stdin/stderr closed to /dev/null.
ProcessOutput RunProcess(const std::vector<std::string>& argv,
                         std::chrono::milliseconds deadline) {
  int pipe_fds[2];
  if (pipe(pipe_fds) != 0) {
    throw RuntimeUnavailableError(std::string("pipe failed: ") + std::strerror(errno));
  }
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, STDIN_FILENO, "/dev/null", O_RDONLY, 0);
  posix_spawn_file_actions_addopen(&actions, STDERR_FILENO, "/dev/null", O_WRONLY, 0);
  posix_spawn_file_actions_adddup2(&actions, pipe_fds[1], STDOUT_FILENO);
  posix_spawn_file_actions_addclose(&actions, pipe_fds[0]);
  posix_spawn_file_actions_addclose(&actions, pipe_fds[1]);
  std::vector<char*> args;
  for (const std::string& a : argv) args.push_back(const_cast<char*>(a.c_str()));
  args.push_back(nullptr);
  pid_t pid = 0;
  const int rc = posix_spawnp(&pid, args[0], &actions, nullptr, args.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  close(pipe_fds[1]);
  ProcessOutput result;
  if (rc != 0) {
    close(pipe_fds[0]);
    throw RuntimeUnavailableError("cannot start " + argv[0] + ": " + std::strerror(rc));
  }
  const auto start = std::chrono::steady_clock::now();
  char buf[65536];
  for (;;) {
    const auto left = deadline - std::chrono::duration_cast<std::chrono::milliseconds>(
                                     std::chrono::steady_clock::now() - start);
    if (left.count() <= 0) {
      result.timed_out = true;
      kill(pid, SIGKILL);
      break;
    }
    pollfd pfd{pipe_fds[0], POLLIN, 0};
    const int ready = poll(&pfd, 1, static_cast<int>(std::min<long>(left.count(), 1000)));
    if (ready < 0 && errno == EINTR) continue;
    if (ready <= 0) continue;
    const ssize_t n = read(pipe_fds[0], buf, sizeof(buf));
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    result.out.append(buf, static_cast<size_t>(n));
  }
  close(pipe_fds[0]);
  int status = 0;
  while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

bool LooksLikePython3(const std::string& exe) {
  try {
    const ProcessOutput out = RunProcess(
        {exe, "-c", "import sys; print(sys.version_info[0])"}, std::chrono::seconds(20));
    return out.exit_code == 0 && out.out.rfind("3", 0) == 0;
  } catch (const RuntimeUnavailableError&) {
    return false;
  }
}

std::filesystem::path TempRequestPath() {
  static std::atomic<unsigned> counter{0};
  return std::filesystem::temp_directory_path() /
         ("wmlab-exec-" + std::to_string(getpid()) + "-" +
          std::to_string(counter.fetch_add(1)) + ".json");
}

}  // namespace

std::string_view ExecStatusName(ExecStatus status) {
  switch (status) {
    case ExecStatus::kOk: return "ok";
    case ExecStatus::kTimeout: return "timeout";
    case ExecStatus::kError: return "error";
  }
  return "?";
}

PythonRuntime PythonRuntime::Discover(const std::optional<std::string>& flag) {
  if (flag && !flag->empty()) {
    if (LooksLikePython3(*flag)) return PythonRuntime(*flag);
    throw RuntimeUnavailableError("'" + *flag + "' is not a working Python 3 interpreter");
  }
  if (const char* env = std::getenv(kPythonEnvVar); env != nullptr && *env != '\0') {
    if (LooksLikePython3(env)) return PythonRuntime(env);
    throw RuntimeUnavailableError(std::string(kPythonEnvVar) + "='" + env +
                                  "' is not a working Python 3 interpreter");
  }
  if (LooksLikePython3("python3")) return PythonRuntime("python3");
  throw RuntimeUnavailableError(
      "no Python 3 interpreter found; pass --python or set " + std::string(kPythonEnvVar));
}

std::vector<ExecResult> PythonRuntime::Run(std::span<const ExecJob> jobs,
                                           double timeout_seconds) const {
  if (jobs.empty()) return {};
  nlohmann::json request;
  request["timeout"] = timeout_seconds;
  size_t calls = 0;
  auto& list = request["jobs"] = nlohmann::json::array();
  for (const ExecJob& job : jobs) {
    list.push_back({{"source", job.source}, {"entry", job.entry}, {"args", job.args}});
    calls += job.args.size() + 1;
  }
  const std::filesystem::path path = TempRequestPath();
  {
    std::ofstream out(path, std::ios::binary);
    out << request.dump();
    if (!out) throw RuntimeUnavailableError("cannot write " + path.string());
  }
  const auto budget = std::chrono::milliseconds(
      static_cast<long>(1000.0 * (30.0 + timeout_seconds * static_cast<double>(calls))));
  ProcessOutput out;
  try {
    out = RunProcess({executable_, "-c", kDriver, path.string()}, budget);
  } catch (...) {
    std::filesystem::remove(path);
    throw;
  }
  std::filesystem::remove(path);
  if (out.timed_out) throw RuntimeUnavailableError("Python driver exceeded its time budget");
  if (out.exit_code != 0) {
    throw RuntimeUnavailableError("Python driver exited with status " +
                                  std::to_string(out.exit_code));
  }
  std::vector<ExecResult> results;
  try {
    const nlohmann::json parsed = nlohmann::json::parse(out.out);
    for (const auto& item : parsed) {
      ExecResult r;
      const std::string status = item.at("status").get<std::string>();
      r.status = status == "ok"        ? ExecStatus::kOk
                 : status == "timeout" ? ExecStatus::kTimeout
                                       : ExecStatus::kError;
      r.values = item.at("values").get<std::vector<std::string>>();
      r.message = item.at("message").get<std::string>();
      results.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw RuntimeUnavailableError(std::string("malformed driver output: ") + e.what());
  }
  if (results.size() != jobs.size()) {
    throw RuntimeUnavailableError("driver returned " + std::to_string(results.size()) +
                                  " results for " + std::to_string(jobs.size()) + " jobs");
  }
  return results;
}

}  // namespace wmlab
