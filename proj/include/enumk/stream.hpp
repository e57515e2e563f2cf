#pragma once
// Single-consumer pull stream implemented as a C++20 coroutine generator.
// Destroying the stream mid-iteration tears down the whole coroutine chain,
// which is how maxSolutions truncation works without exhausting the space.

#include <coroutine>
#include <exception>
#include <utility>

#include "enumk/graph.hpp"

namespace enumk {

template <class T>
class Generator {
public:
    struct promise_type {
        T current{};
        std::exception_ptr exception;

        Generator get_return_object() {
            return Generator(std::coroutine_handle<promise_type>::from_promise(*this));
        }
        std::suspend_always initial_suspend() noexcept { return {}; }
        std::suspend_always final_suspend() noexcept { return {}; }
        std::suspend_always yield_value(T value) {
            current = std::move(value);
            return {};
        }
        void return_void() {}
        void unhandled_exception() { exception = std::current_exception(); }
    };

    Generator() = default;
    explicit Generator(std::coroutine_handle<promise_type> handle) : handle_(handle) {}
    Generator(const Generator&) = delete;
    Generator& operator=(const Generator&) = delete;
    Generator(Generator&& other) noexcept : handle_(std::exchange(other.handle_, {})) {}
    Generator& operator=(Generator&& other) noexcept {
        if (this != &other) {
            destroy();
            handle_ = std::exchange(other.handle_, {});
        }
        return *this;
    }
    ~Generator() { destroy(); }

    // Advances to the next value; false when exhausted.
    bool next() {
        if (!handle_ || handle_.done()) return false;
        handle_.resume();
        if (handle_.promise().exception) std::rethrow_exception(handle_.promise().exception);
        return !handle_.done();
    }
    T& value() { return handle_.promise().current; }

    // minimal range-for support
    struct sentinel {};
    struct iterator {
        Generator* gen;
        bool alive;
        iterator& operator++() {
            alive = gen->next();
            return *this;
        }
        T& operator*() const { return gen->value(); }
        bool operator!=(sentinel) const { return alive; }
    };
    iterator begin() { return iterator{this, next()}; }
    sentinel end() { return {}; }

private:
    void destroy() {
        if (handle_) handle_.destroy();
        handle_ = {};
    }
    std::coroutine_handle<promise_type> handle_;
};

// Every enumerator in this project streams sorted vertex sets.
using SolutionStream = Generator<VertexSet>;

}  // namespace enumk
