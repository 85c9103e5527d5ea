#pragma once

#include <vector>

namespace swi::detection {

enum class EditorEventKind { keystroke, check };

struct EditorEvent {
    double time; // seconds
    EditorEventKind kind;
};

// True iff the writer has paused for at least `pause_seconds` since the last
// keystroke and has typed something since the last check.
bool should_trigger(const std::vector<EditorEvent> &log, double now, double pause_seconds = 2.0);

// Per-editing-session trigger state; single writer.
class PauseTrigger {
public:
    explicit PauseTrigger(double pause_seconds = 2.0) : pause(pause_seconds) {}
    void keystroke(double time) { log.push_back({time, EditorEventKind::keystroke}); }
    // Fires and records a check when should_trigger holds.
    bool poll(double now);

private:
    double pause;
    std::vector<EditorEvent> log;
};

} // namespace swi::detection
