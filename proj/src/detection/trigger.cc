#include "trigger.h"

namespace swi::detection {

bool should_trigger(const std::vector<EditorEvent> &log, double now, double pause_seconds) {
    const EditorEvent *last_key = nullptr;
    const EditorEvent *last_check = nullptr;
    for (const EditorEvent &e : log) {
        if (e.kind == EditorEventKind::keystroke)
            last_key = &e;
        else
            last_check = &e;
    }
    if (!last_key)
        return false;
    if (last_check && last_check->time >= last_key->time)
        return false;
    return now - last_key->time >= pause_seconds;
}

bool PauseTrigger::poll(double now) {
    if (!should_trigger(log, now, pause))
        return false;
    log.push_back({now, EditorEventKind::check});
    return true;
}

} // namespace swi::detection
